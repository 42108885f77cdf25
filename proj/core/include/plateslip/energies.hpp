#pragma once

// Energy functionals of the two-plate cohesive model on P1 fields.
//
// Displacement pairs are stacked as x = [u1; u2] (each node-major, N * n entries),
// damage pairs as a = [alpha1; alpha2] (N entries each).

#include <array>
#include <optional>

#include "plateslip/cohesive_law.hpp"
#include "plateslip/fe.hpp"
#include "plateslip/materials.hpp"

namespace plateslip {

using FieldPair = std::array<FEField, 2>;
using TensorPair = std::array<ElasticTensor, 2>;

/// Internal damage energy w_i(s) = sigma1_i s + sigma2_i s^2 and gradient exponent r > n.
struct DamageModel {
  std::array<double, 2> sigma1{1.0, 1.0};
  std::array<double, 2> sigma2{0.0, 0.0};
  double r = 3.0;

  [[nodiscard]] double w(int layer, double s) const { return sigma1[layer] * s + sigma2[layer] * s * s; }
  [[nodiscard]] double dw(int layer, double s) const { return sigma1[layer] + 2.0 * sigma2[layer] * s; }
};

/// Everything that defines an evolution problem apart from solver settings.
struct Problem {
  SpacePtr space;
  TensorPair tensors;
  CohesiveLaw law;
  LoadingProgram loading;
  std::optional<DamageModel> damage;

  [[nodiscard]] int dim() const { return space->dim(); }
  [[nodiscard]] int dofs_per_layer() const { return space->num_nodes() * space->dim(); }
};

struct EnergyBreakdown {
  std::array<double, 2> elastic{0.0, 0.0};
  double elastic_total = 0.0;
  double cohesive = 0.0;
  std::array<double, 2> damage_internal{0.0, 0.0};
  std::array<double, 2> damage_gradient{0.0, 0.0};
  double damage_total = 0.0;
  double work_accumulated = 0.0;
  double total = 0.0;
};

Eigen::VectorXd stack(const FieldPair& pair);
FieldPair unstack(const SpacePtr& space, int components, const Eigen::VectorXd& x);
FieldPair zero_pair(const SpacePtr& space, int components);

/// Nodal slip magnitude |u1 - u2| as a scalar field.
FEField slip_magnitude(const FieldPair& u);

/// ||(v1, v2)||_{H1} = sqrt(||v1||^2 + ||v2||^2).
double pair_h1_norm(const FieldPair& v);

/// 1/2 int C(x, alpha) e(u) : e(u). `alpha` may be null (sound material).
double elastic_energy(const FEField& u, const ElasticTensor& tensor, const FEField* alpha = nullptr);
std::array<double, 2> elastic_energy(const FieldPair& u, const TensorPair& tensors,
                                     const FieldPair* alpha = nullptr);

/// int Phi(delta, gamma) with nodal (lumped mass) quadrature; `density` picks Phi or Phi_eps.
double cohesive_energy(const FEField& delta, const FEField& gamma, const CohesiveDensity& density);
double cohesive_energy(const FieldPair& u, const FEField& gamma, const CohesiveDensity& density);

struct DamageEnergy {
  std::array<double, 2> internal{0.0, 0.0};
  std::array<double, 2> gradient{0.0, 0.0};
  [[nodiscard]] double total() const { return internal[0] + internal[1] + gradient[0] + gradient[1]; }
};

/// sum_i int w_i(alpha_i) + |grad alpha_i|^r / r.
DamageEnergy damage_energy(const FieldPair& alpha, const DamageModel& model);

/// Elastic + cohesive (+ damage) parts of the energy at a state.
EnergyBreakdown evaluate_energy(const Problem& problem, const FieldPair& u, const FEField& gamma,
                                const FieldPair* alpha, const CohesiveDensity& density);

/// sum_i int C_i(alpha_i) e(u_i) : e(v).
double stress_power(const FieldPair& u, const FEField& v, const TensorPair& tensors,
                    const FieldPair* alpha = nullptr);

/// Work along the time-discrete competitor path u_prev + (s(t) - s(t_prev)) g on [t_prev, t]:
///   ds <sigma(u_prev), e(g)> + ds^2 / 2 sum_i int C_i e(g) : e(g),   ds = s(t) - s(t_prev).
double competitor_work_increment(const Problem& problem, const FieldPair& u_prev, const FieldPair* alpha_prev,
                                 double t_prev, double t);
/// Left-endpoint rule for the work integral: ds <sigma(u_prev), e(g)>.
double left_endpoint_work_increment(const Problem& problem, const FieldPair& u_prev,
                                    const FieldPair* alpha_prev, double t_prev, double t);

/// Stiffness matrix of one layer: K_ab = int C(alpha) e(phi_a) : e(phi_b).
Eigen::SparseMatrix<double> assemble_stiffness(const FESpace& space, const ElasticTensor& tensor,
                                               const FEField* alpha = nullptr);

/// Extension of a Dirichlet trace minimizing sum_i 1/2 int C_i e(g) : e(g).
FEField minimal_energy_lift(const SpacePtr& space, const TensorPair& tensors, const FieldFunction& trace);
/// Extension by the same analytic function everywhere.
FEField analytic_lift(const SpacePtr& space, const FieldFunction& trace);

/// Discrete energy of the displacement pair at fixed history slip (and fixed damage).
///
/// Works on the full stacked vector x = [u1; u2]; the caller keeps Dirichlet dofs fixed.
class DisplacementFunctional {
 public:
  DisplacementFunctional(const Problem& problem, const CohesiveDensity& density, const FEField& gamma,
                         const FieldPair* alpha = nullptr);

  [[nodiscard]] double value(const Eigen::VectorXd& x) const;
  [[nodiscard]] Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  [[nodiscard]] Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& x) const;

  [[nodiscard]] double elastic_value(const Eigen::VectorXd& x) const;
  [[nodiscard]] double cohesive_value(const Eigen::VectorXd& x) const;
  [[nodiscard]] const CohesiveDensity& density() const { return density_; }
  [[nodiscard]] int size() const { return 2 * per_layer_; }

 private:
  const Problem& problem_;
  CohesiveDensity density_;
  Eigen::VectorXd gamma_;
  std::array<Eigen::SparseMatrix<double>, 2> stiffness_;
  int per_layer_;
  int n_;
};

/// Damage part of the joint energy at fixed displacements, as a function of a = [alpha1; alpha2]:
///   sum_i int (eta + (1 - alpha_i)^2) 1/2 C_i e(u_i) : e(u_i) + w_i(alpha_i) + |grad alpha_i|^r / r.
class DamageFunctional {
 public:
  DamageFunctional(const Problem& problem, const FieldPair& u);

  [[nodiscard]] double value(const Eigen::VectorXd& a) const;
  [[nodiscard]] Eigen::VectorXd gradient(const Eigen::VectorXd& a) const;
  [[nodiscard]] Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& a) const;
  [[nodiscard]] int size() const { return 2 * nodes_; }

 private:
  const Problem& problem_;
  const DamageModel& model_;
  // Undegraded strain energy density C_i e(u_i) : e(u_i) per layer and quadrature point.
  std::array<std::vector<double>, 2> strain_density_;
  int nodes_;
};

/// theta Fb(a) + (1 - theta) Fb(b) - Fb(theta a + (1 - theta) b) - mu/2 theta (1 - theta) ||a - b||^2_{H1},
/// for displacement pairs sharing the Dirichlet trace (Fb(v) = F(v) with v - w(t) as variable).
double shifted_energy_gap(const Problem& problem, const CohesiveDensity& density, double t, const FieldPair& ua,
                          const FieldPair& ub, const FEField& gamma, double theta, double mu);

/// mu = (c1 ^ c2) / K^2 - 2 lambda.
double convexity_modulus(const Problem& problem, double korn);

struct AprioriBound {
  double energy = 0.0;  // bound on F_eps(t^k, u^k, gamma^{k-1})
  double h1 = 0.0;      // bound on ||u^k||_{H1} of the pair
};

/// Energetic bound obtained with the competitor (w(t), w(t)), maximized over the time grid.
AprioriBound apriori_bound(const Problem& problem, double korn, int steps);

}  // namespace plateslip
