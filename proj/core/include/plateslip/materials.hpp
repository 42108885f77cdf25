#pragma once

#include <optional>

#include "plateslip/fe.hpp"

namespace plateslip {

/// Lamé pair that may vary affinely in space: value(x) = value0 + grad . x.
struct LameAffine {
  double lambda0 = 0.0;
  double mu0 = 1.0;
  std::array<double, 2> lambda_grad{0.0, 0.0};
  std::array<double, 2> mu_grad{0.0, 0.0};
};

struct LamePair {
  double lambda = 0.0;
  double mu = 1.0;
};

/// Isotropic stiffness C A = lambda (tr A) I + 2 mu A_sym, optionally degraded by damage:
/// C(alpha) = (eta + (1 - alpha)^2) C.
class ElasticTensor {
 public:
  enum class Kind { IsotropicHomogeneous, IsotropicField };

  static ElasticTensor isotropic(int dim, double lame_lambda, double lame_mu);
  /// Spatially varying Lamé pair; admissibility is checked on the corners of `domain`.
  static ElasticTensor isotropic_field(int dim, const LameAffine& lame, const Box& domain);

  [[nodiscard]] ElasticTensor with_degradation(double eta) const;

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const LameAffine& lame() const { return lame_; }
  [[nodiscard]] const Box& domain() const { return domain_; }
  [[nodiscard]] bool damage_enabled() const { return eta_.has_value(); }
  [[nodiscard]] double eta() const { return eta_.value_or(0.0); }

  [[nodiscard]] LamePair lame_at(const Point& x) const;
  /// eta + (1 - alpha)^2 with damage, 1 otherwise. A missing alpha means sound material.
  [[nodiscard]] double degradation(std::optional<double> alpha) const;
  /// d/dalpha of the degradation factor.
  [[nodiscard]] double degradation_slope(double alpha) const;

  [[nodiscard]] SmallMat apply(const Point& x, std::optional<double> alpha, const SmallMat& A) const;
  /// C(x) A : B without degradation.
  [[nodiscard]] double contract(const Point& x, const SmallMat& A, const SmallMat& B) const;

 private:
  ElasticTensor(Kind kind, int dim, const LameAffine& lame, const Box& domain);

  Kind kind_;
  int dim_;
  LameAffine lame_;
  Box domain_;
  std::optional<double> eta_;
};

/// c with C A : A >= c |A_sym|^2 everywhere (times eta with damage: worst case alpha = 1).
double coercivity_constant(const ElasticTensor& tensor);

struct KornEstimate {
  double constant = 0.0;   // K_{2,h}
  double sigma_min = 0.0;  // smallest eigenvalue of (e-Gram, H1-Gram) on constrained fields
  int iterations = 0;
  double residual = 0.0;
};

/// Discrete Korn-Poincaré constant: smallest K with ||v||_{H1} <= K ||e(v)||_{L2} over
/// P1 vector fields vanishing on the Dirichlet nodes. Computed by block inverse
/// iteration with Rayleigh-Ritz.
KornEstimate estimate_korn_constant(const FESpace& space);

/// (c1 ^ c2) / (2 K^2): the cohesive curvature bound must stay strictly below this.
double convexity_threshold(double c1, double c2, double korn);

}  // namespace plateslip
