#pragma once

// Cohesive interface density built from a loading function psi.
//
// For y = |u1 - u2| (actual slip) and z = history slip,
//
//   Phi(y, z) = psi'(z) / (2 z) * y^2 + psi(z) - z psi'(z) / 2   if y < z   (unloading, quadratic)
//             = psi(y)                                          otherwise (loading, concave)
//
// The regularized density Phi_eps uses psi_eps instead of psi, where
// psi_eps'(z) = min(z / eps, psi'(z)); this removes the kink of Phi at the origin.

#include <optional>

namespace plateslip {

enum class LawKind { Exponential, CubicCapped };

/// Loading function psi of the interface.
///
/// Exponential:  psi(z) = kappa (1 - exp(-rho z)).
/// CubicCapped:  psi(z) = kappa (1 - (1 - z/delta)^3) on [0, delta], kappa beyond.
class CohesiveLaw {
 public:
  static CohesiveLaw exponential(double kappa, double rho);
  static CohesiveLaw cubic_capped(double kappa, double delta_cap);

  /// Same law with a user-chosen curvature bound; must not be below the analytic one.
  [[nodiscard]] CohesiveLaw with_lambda(double lambda) const;

  [[nodiscard]] LawKind kind() const { return kind_; }
  [[nodiscard]] double kappa() const { return kappa_; }
  /// rho for Exponential, delta_cap for CubicCapped.
  [[nodiscard]] double shape() const { return shape_; }
  /// Lower curvature bound: psi'' >= -lambda on [0, inf).
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] double analytic_lambda() const;

  [[nodiscard]] double psi(double z) const;
  [[nodiscard]] double dpsi(double z) const;
  [[nodiscard]] double d2psi(double z) const;
  [[nodiscard]] double sup_psi() const { return kappa_; }
  [[nodiscard]] double dpsi0() const { return dpsi(0.0); }

  /// Characteristic slip scale (1/rho or delta_cap).
  [[nodiscard]] double slip_scale() const;

 private:
  CohesiveLaw(LawKind kind, double kappa, double shape);

  LawKind kind_;
  double kappa_;
  double shape_;
  double lambda_;
};

/// Unique fixed point of s -> eps psi'(s), found by bisection on [0, eps psi'(0)].
double fixed_point_z_eps(const CohesiveLaw& law, double eps);

/// psi_eps: quadratic z^2/(2 eps) below z_eps, shifted psi above.
class RegularizedLaw {
 public:
  RegularizedLaw(const CohesiveLaw& base, double eps);

  [[nodiscard]] const CohesiveLaw& base() const { return base_; }
  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] double z_eps() const { return z_eps_; }

  [[nodiscard]] double psi(double z) const;
  [[nodiscard]] double dpsi(double z) const;
  // One-sided at z_eps: the right value psi''(z_eps) is returned there.
  [[nodiscard]] double d2psi(double z) const;
  [[nodiscard]] double dpsi0() const { return base_.dpsi0(); }

  /// sup_z |psi_eps(z) - psi(z)|, attained on [z_eps, inf).
  [[nodiscard]] double sup_psi_gap() const;
  /// Upper bound for sup_{y,z} |Phi_eps(y,z) - Phi(y,z)|.
  [[nodiscard]] double phi_gap_bound() const;

 private:
  CohesiveLaw base_;
  double eps_;
  double z_eps_;
  double shift_;  // psi_eps - psi on [z_eps, inf)
};

double psi(const CohesiveLaw& law, double z);

double phi(const CohesiveLaw& law, double y, double z);
/// At (0,0) returns the one-sided value psi'(0).
double dphi_dy(const CohesiveLaw& law, double y, double z);
double dphi_dz(const CohesiveLaw& law, double y, double z);
double d2phi_dy2(const CohesiveLaw& law, double y, double z);

double phi_eps(const RegularizedLaw& reg, double y, double z);
double dphi_eps_dy(const RegularizedLaw& reg, double y, double z);
double dphi_eps_dz(const RegularizedLaw& reg, double y, double z);
double d2phi_eps_dy2(const RegularizedLaw& reg, double y, double z);

/// Traction/slip ratio on the unloading branch, psi'(z)/z. Requires z > 0.
double unloading_slope(const CohesiveLaw& law, double z);

/// Interface density used by the energy functionals: Phi, or Phi_eps when eps is set.
///
/// Besides the partials it exposes dy_over_y(y, z) = dPhi/dy / y, the tangential
/// stiffness of the vector map d -> Phi(|d|, z) (its limit at y = 0 is used there).
class CohesiveDensity {
 public:
  explicit CohesiveDensity(const CohesiveLaw& law);
  CohesiveDensity(const CohesiveLaw& law, double eps);

  [[nodiscard]] bool regularized() const { return reg_.has_value(); }
  [[nodiscard]] const CohesiveLaw& law() const { return law_; }
  /// Only valid when regularized().
  [[nodiscard]] const RegularizedLaw& regularization() const { return *reg_; }

  [[nodiscard]] double value(double y, double z) const;
  [[nodiscard]] double dy(double y, double z) const;
  [[nodiscard]] double dz(double y, double z) const;
  [[nodiscard]] double dyy(double y, double z) const;
  [[nodiscard]] double dy_over_y(double y, double z) const;
  [[nodiscard]] double sup_value() const { return law_.sup_psi(); }

 private:
  CohesiveLaw law_;
  std::optional<RegularizedLaw> reg_;
};

}  // namespace plateslip
