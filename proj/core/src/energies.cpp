#include "plateslip/energies.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "plateslip/errors.hpp"

namespace plateslip {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

double alpha_at(const FEField* alpha, int cell, const QuadraturePoint& q) {
  return alpha == nullptr ? 0.0 : alpha->value_at(cell, q.bary)[0];
}

void check_gamma(const FEField& gamma) {
  if (gamma.components() != 1) throw DomainError("history slip must be a scalar field");
  for (Eigen::Index i = 0; i < gamma.coeffs().size(); ++i) {
    if (!(gamma.coeffs()[i] >= 0.0)) {
      throw StateCorruption("state corruption: history slip is negative at node " + std::to_string(i));
    }
  }
}

void check_pair(const FieldPair& u) {
  if (!u[0].compatible(u[1])) throw DomainError("displacement pair lives on different spaces");
}

// Strain of the basis function phi_a e_comp: row `comp` equals grad phi_a.
SmallMat basis_strain(int n, int comp, const std::array<double, 2>& grad) {
  SmallMat g = SmallMat::Zero(n, n);
  for (int d = 0; d < n; ++d) g(comp, d) = grad[d];
  return g;
}

double degradation_or_one(const ElasticTensor& tensor, const FEField* alpha, int cell, const QuadraturePoint& q) {
  if (alpha == nullptr) return 1.0;
  return tensor.degradation(std::clamp(alpha_at(alpha, cell, q), 0.0, 1.0));
}

}  // namespace

Eigen::VectorXd stack(const FieldPair& pair) {
  check_pair(pair);
  Eigen::VectorXd x(pair[0].coeffs().size() * 2);
  x << pair[0].coeffs(), pair[1].coeffs();
  return x;
}

FieldPair unstack(const SpacePtr& space, int components, const Eigen::VectorXd& x) {
  const Eigen::Index m = static_cast<Eigen::Index>(space->num_nodes()) * components;
  if (x.size() != 2 * m) throw DomainError("stacked vector has the wrong length");
  return {FEField(space, components, x.head(m)), FEField(space, components, x.tail(m))};
}

FieldPair zero_pair(const SpacePtr& space, int components) {
  return {FEField(space, components), FEField(space, components)};
}

FEField slip_magnitude(const FieldPair& u) {
  check_pair(u);
  FEField out(u[0].space_ptr(), 1);
  for (int a = 0; a < u[0].num_nodes(); ++a) out.at(a) = (u[0].node_value(a) - u[1].node_value(a)).norm();
  return out;
}

double pair_h1_norm(const FieldPair& v) { return std::hypot(h1_norm(v[0]), h1_norm(v[1])); }

double elastic_energy(const FEField& u, const ElasticTensor& tensor, const FEField* alpha) {
  const FESpace& space = u.space();
  if (u.components() != space.dim()) throw DomainError("displacement must be a vector field");
  if (alpha != nullptr && !alpha->compatible(FEField(u.space_ptr(), 1))) {
    throw DomainError("damage field lives on a different space");
  }
  const auto rule = quadrature_rule(space.dim());
  double energy = 0.0;
  for (int c = 0; c < space.num_cells(); ++c) {
    const SmallMat e = u.cell_gradient(c);
    const double measure = space.geometry(c).measure;
    for (const QuadraturePoint& q : rule) {
      const Point x = space.map_to_cell(c, q.bary);
      energy += 0.5 * q.weight * measure * degradation_or_one(tensor, alpha, c, q) * tensor.contract(x, e, e);
    }
  }
  return energy;
}

std::array<double, 2> elastic_energy(const FieldPair& u, const TensorPair& tensors, const FieldPair* alpha) {
  check_pair(u);
  return {elastic_energy(u[0], tensors[0], alpha ? &(*alpha)[0] : nullptr),
          elastic_energy(u[1], tensors[1], alpha ? &(*alpha)[1] : nullptr)};
}

double cohesive_energy(const FEField& delta, const FEField& gamma, const CohesiveDensity& density) {
  check_gamma(gamma);
  if (delta.components() != 1 || !delta.compatible(gamma)) throw DomainError("slip field mismatch");
  const auto& mass = delta.space().lumped_mass();
  double energy = 0.0;
  for (int a = 0; a < delta.num_nodes(); ++a) energy += mass[a] * density.value(delta.at(a), gamma.at(a));
  return energy;
}

double cohesive_energy(const FieldPair& u, const FEField& gamma, const CohesiveDensity& density) {
  return cohesive_energy(slip_magnitude(u), gamma, density);
}

DamageEnergy damage_energy(const FieldPair& alpha, const DamageModel& model) {
  check_pair(alpha);
  const FESpace& space = alpha[0].space();
  if (!(model.r > space.dim())) throw ConfigError("damage gradient exponent r must exceed the dimension");
  const auto rule = quadrature_rule(space.dim());
  DamageEnergy out;
  for (int i = 0; i < 2; ++i) {
    for (Eigen::Index k = 0; k < alpha[i].coeffs().size(); ++k) {
      const double v = alpha[i].coeffs()[k];
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("damage value must lie in [0,1]");
    }
    for (int c = 0; c < space.num_cells(); ++c) {
      const double measure = space.geometry(c).measure;
      for (const QuadraturePoint& q : rule) {
        out.internal[i] += q.weight * measure * model.w(i, alpha[i].value_at(c, q.bary)[0]);
      }
      const double g = alpha[i].cell_gradient(c).norm();
      out.gradient[i] += measure * std::pow(g, model.r) / model.r;
    }
  }
  return out;
}

EnergyBreakdown evaluate_energy(const Problem& problem, const FieldPair& u, const FEField& gamma,
                                const FieldPair* alpha, const CohesiveDensity& density) {
  EnergyBreakdown e;
  e.elastic = elastic_energy(u, problem.tensors, alpha);
  e.elastic_total = e.elastic[0] + e.elastic[1];
  e.cohesive = cohesive_energy(u, gamma, density);
  if (alpha != nullptr && problem.damage) {
    const DamageEnergy d = damage_energy(*alpha, *problem.damage);
    e.damage_internal = d.internal;
    e.damage_gradient = d.gradient;
    e.damage_total = d.total();
  }
  e.total = e.elastic_total + e.cohesive + e.damage_total;
  return e;
}

double stress_power(const FieldPair& u, const FEField& v, const TensorPair& tensors, const FieldPair* alpha) {
  check_pair(u);
  const FESpace& space = v.space();
  const auto rule = quadrature_rule(space.dim());
  double power = 0.0;
  for (int c = 0; c < space.num_cells(); ++c) {
    const SmallMat ev = v.cell_gradient(c);
    const double measure = space.geometry(c).measure;
    for (int i = 0; i < 2; ++i) {
      const SmallMat eu = u[i].cell_gradient(c);
      const FEField* a = alpha ? &(*alpha)[i] : nullptr;
      for (const QuadraturePoint& q : rule) {
        const Point x = space.map_to_cell(c, q.bary);
        power += q.weight * measure * degradation_or_one(tensors[i], a, c, q) * tensors[i].contract(x, eu, ev);
      }
    }
  }
  return power;
}

double left_endpoint_work_increment(const Problem& problem, const FieldPair& u_prev, const FieldPair* alpha_prev,
                                    double t_prev, double t) {
  const double ds = problem.loading.schedule(t) - problem.loading.schedule(t_prev);
  if (ds == 0.0) return 0.0;
  return ds * stress_power(u_prev, problem.loading.shape(), problem.tensors, alpha_prev);
}

double competitor_work_increment(const Problem& problem, const FieldPair& u_prev, const FieldPair* alpha_prev,
                                 double t_prev, double t) {
  const double ds = problem.loading.schedule(t) - problem.loading.schedule(t_prev);
  if (ds == 0.0) return 0.0;
  const FEField& g = problem.loading.shape();
  const FieldPair gg{g, g};
  const double quadratic = stress_power(gg, g, problem.tensors, alpha_prev);
  return ds * stress_power(u_prev, g, problem.tensors, alpha_prev) + 0.5 * ds * ds * quadratic;
}

Eigen::SparseMatrix<double> assemble_stiffness(const FESpace& space, const ElasticTensor& tensor,
                                               const FEField* alpha) {
  const int n = space.dim();
  const auto rule = quadrature_rule(n);
  Triplets t;
  t.reserve(static_cast<std::size_t>(space.num_cells()) * (n + 1) * (n + 1) * n * n);
  for (int c = 0; c < space.num_cells(); ++c) {
    const CellGeometry& geo = space.geometry(c);
    auto nodes = space.cell_nodes(c);
    // Average the pointwise factor C(x, alpha) over the rule: strains are cellwise constant.
    std::vector<std::pair<Point, double>> qp;
    for (const QuadraturePoint& q : rule) {
      qp.emplace_back(space.map_to_cell(c, q.bary), q.weight * geo.measure * degradation_or_one(tensor, alpha, c, q));
    }
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (int i = 0; i < n; ++i) {
        const SmallMat ea = basis_strain(n, i, geo.grad[a]);
        for (std::size_t b = 0; b < nodes.size(); ++b) {
          for (int j = 0; j < n; ++j) {
            const SmallMat eb = basis_strain(n, j, geo.grad[b]);
            double k = 0.0;
            for (const auto& [x, w] : qp) k += w * tensor.contract(x, ea, eb);
            t.emplace_back(nodes[a] * n + i, nodes[b] * n + j, k);
          }
        }
      }
    }
  }
  const Eigen::Index size = static_cast<Eigen::Index>(space.num_nodes()) * n;
  Eigen::SparseMatrix<double> K(size, size);
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

FEField analytic_lift(const SpacePtr& space, const FieldFunction& trace) {
  return interpolate(trace, space, space->dim());
}

FEField minimal_energy_lift(const SpacePtr& space, const TensorPair& tensors, const FieldFunction& trace) {
  const int n = space->dim();
  FEField g = interpolate(trace, space, n);
  const auto& free = space->free_nodes();
  if (free.empty()) return g;
  const Eigen::SparseMatrix<double> K =
      assemble_stiffness(*space, tensors[0]) + assemble_stiffness(*space, tensors[1]);

  std::vector<int> index(static_cast<std::size_t>(space->num_nodes()) * n, -1);
  int m = 0;
  for (int a : free) {
    for (int c = 0; c < n; ++c) index[a * n + c] = m++;
  }
  // Zero the free values so that K g is the load from the Dirichlet data alone.
  for (int a : free) {
    for (int c = 0; c < n; ++c) g.at(a, c) = 0.0;
  }
  const Eigen::VectorXd load = K * g.coeffs();
  Triplets t;
  Eigen::VectorXd rhs(m);
  for (int k = 0; k < K.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, k); it; ++it) {
      const int r = index[it.row()];
      const int col = index[it.col()];
      if (r >= 0 && col >= 0) t.emplace_back(r, col, it.value());
    }
  }
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= 0) rhs[index[i]] = -load[static_cast<Eigen::Index>(i)];
  }
  Eigen::SparseMatrix<double> Kff(m, m);
  Kff.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Kff);
  if (solver.info() != Eigen::Success) throw DiscretizationError("stiffness matrix is singular on free dofs");
  const Eigen::VectorXd sol = solver.solve(rhs);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= 0) g.coeffs()[static_cast<Eigen::Index>(i)] = sol[index[i]];
  }
  return g;
}

// ---------------------------------------------------------------------------------------------

DisplacementFunctional::DisplacementFunctional(const Problem& problem, const CohesiveDensity& density,
                                               const FEField& gamma, const FieldPair* alpha)
    : problem_(problem), density_(density), gamma_(gamma.coeffs()) {
  check_gamma(gamma);
  n_ = problem.dim();
  per_layer_ = problem.dofs_per_layer();
  for (int i = 0; i < 2; ++i) {
    stiffness_[i] = assemble_stiffness(*problem.space, problem.tensors[i], alpha ? &(*alpha)[i] : nullptr);
  }
}

double DisplacementFunctional::elastic_value(const Eigen::VectorXd& x) const {
  double e = 0.0;
  for (int i = 0; i < 2; ++i) {
    const auto xi = x.segment(static_cast<Eigen::Index>(i) * per_layer_, per_layer_);
    e += 0.5 * xi.dot(stiffness_[i] * xi);
  }
  return e;
}

double DisplacementFunctional::cohesive_value(const Eigen::VectorXd& x) const {
  const auto& mass = problem_.space->lumped_mass();
  double e = 0.0;
  for (int a = 0; a < problem_.space->num_nodes(); ++a) {
    const Eigen::VectorXd d = x.segment(a * n_, n_) - x.segment(per_layer_ + a * n_, n_);
    e += mass[a] * density_.value(d.norm(), gamma_[a]);
  }
  return e;
}

double DisplacementFunctional::value(const Eigen::VectorXd& x) const { return elastic_value(x) + cohesive_value(x); }

Eigen::VectorXd DisplacementFunctional::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < 2; ++i) {
    const Eigen::Index off = static_cast<Eigen::Index>(i) * per_layer_;
    g.segment(off, per_layer_) = stiffness_[i] * x.segment(off, per_layer_);
  }
  const auto& mass = problem_.space->lumped_mass();
  for (int a = 0; a < problem_.space->num_nodes(); ++a) {
    const Eigen::VectorXd d = x.segment(a * n_, n_) - x.segment(per_layer_ + a * n_, n_);
    const double y = d.norm();
    if (y == 0.0) continue;  // dir(0) = 0
    const Eigen::VectorXd f = mass[a] * density_.dy(y, gamma_[a]) / y * d;
    g.segment(a * n_, n_) += f;
    g.segment(per_layer_ + a * n_, n_) -= f;
  }
  return g;
}

Eigen::SparseMatrix<double> DisplacementFunctional::hessian(const Eigen::VectorXd& x) const {
  Triplets t;
  for (int i = 0; i < 2; ++i) {
    const int off = i * per_layer_;
    for (int k = 0; k < stiffness_[i].outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_[i], k); it; ++it) {
        t.emplace_back(off + it.row(), off + it.col(), it.value());
      }
    }
  }
  const auto& mass = problem_.space->lumped_mass();
  for (int a = 0; a < problem_.space->num_nodes(); ++a) {
    const Eigen::VectorXd d = x.segment(a * n_, n_) - x.segment(per_layer_ + a * n_, n_);
    const double y = d.norm();
    const double z = gamma_[a];
    Eigen::MatrixXd H;
    const double tangential = density_.dy_over_y(y, z);
    if (y == 0.0) {
      H = tangential * Eigen::MatrixXd::Identity(n_, n_);
    } else {
      const Eigen::VectorXd nrm = d / y;
      const Eigen::MatrixXd nn = nrm * nrm.transpose();
      H = density_.dyy(y, z) * nn + tangential * (Eigen::MatrixXd::Identity(n_, n_) - nn);
    }
    if (!H.allFinite()) throw NumericalError("cohesive Hessian is not finite; use the regularized density");
    H *= mass[a];
    for (int p = 0; p < n_; ++p) {
      for (int q = 0; q < n_; ++q) {
        const int r1 = a * n_ + p;
        const int c1 = a * n_ + q;
        t.emplace_back(r1, c1, H(p, q));
        t.emplace_back(per_layer_ + r1, per_layer_ + c1, H(p, q));
        t.emplace_back(r1, per_layer_ + c1, -H(p, q));
        t.emplace_back(per_layer_ + r1, c1, -H(p, q));
      }
    }
  }
  Eigen::SparseMatrix<double> out(size(), size());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// ---------------------------------------------------------------------------------------------

DamageFunctional::DamageFunctional(const Problem& problem, const FieldPair& u)
    : problem_(problem), model_(problem.damage.value()), nodes_(problem.space->num_nodes()) {
  check_pair(u);
  if (!(model_.r > problem.dim())) throw ConfigError("damage gradient exponent r must exceed the dimension");
  const FESpace& space = *problem.space;
  const auto rule = quadrature_rule(space.dim());
  for (int i = 0; i < 2; ++i) {
    strain_density_[i].reserve(static_cast<std::size_t>(space.num_cells()) * rule.size());
    for (int c = 0; c < space.num_cells(); ++c) {
      const SmallMat e = u[i].cell_gradient(c);
      for (const QuadraturePoint& q : rule) {
        strain_density_[i].push_back(problem.tensors[i].contract(space.map_to_cell(c, q.bary), e, e));
      }
    }
  }
}

double DamageFunctional::value(const Eigen::VectorXd& a) const {
  const FESpace& space = *problem_.space;
  const auto rule = quadrature_rule(space.dim());
  const int n = space.dim();
  double e = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double eta = problem_.tensors[i].eta();
    const auto ai = a.segment(static_cast<Eigen::Index>(i) * nodes_, nodes_);
    std::size_t k = 0;
    for (int c = 0; c < space.num_cells(); ++c) {
      const CellGeometry& geo = space.geometry(c);
      auto cn = space.cell_nodes(c);
      for (const QuadraturePoint& q : rule) {
        double aq = 0.0;
        for (std::size_t j = 0; j < cn.size(); ++j) aq += q.bary[j] * ai[cn[j]];
        const double deg = eta + (1.0 - aq) * (1.0 - aq);
        e += q.weight * geo.measure * (0.5 * deg * strain_density_[i][k++] + model_.w(i, aq));
      }
      double g2 = 0.0;
      for (int d = 0; d < n; ++d) {
        double gd = 0.0;
        for (std::size_t j = 0; j < cn.size(); ++j) gd += ai[cn[j]] * geo.grad[j][d];
        g2 += gd * gd;
      }
      e += geo.measure * std::pow(std::sqrt(g2), model_.r) / model_.r;
    }
  }
  return e;
}

Eigen::VectorXd DamageFunctional::gradient(const Eigen::VectorXd& a) const {
  const FESpace& space = *problem_.space;
  const auto rule = quadrature_rule(space.dim());
  const int n = space.dim();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(a.size());
  for (int i = 0; i < 2; ++i) {
    const Eigen::Index off = static_cast<Eigen::Index>(i) * nodes_;
    const auto ai = a.segment(off, nodes_);
    std::size_t k = 0;
    for (int c = 0; c < space.num_cells(); ++c) {
      const CellGeometry& geo = space.geometry(c);
      auto cn = space.cell_nodes(c);
      for (const QuadraturePoint& q : rule) {
        double aq = 0.0;
        for (std::size_t j = 0; j < cn.size(); ++j) aq += q.bary[j] * ai[cn[j]];
        const double dens = -(1.0 - aq) * strain_density_[i][k++] + model_.dw(i, aq);
        for (std::size_t j = 0; j < cn.size(); ++j) g[off + cn[j]] += q.weight * geo.measure * q.bary[j] * dens;
      }
      std::array<double, 2> grad{0.0, 0.0};
      for (int d = 0; d < n; ++d) {
        for (std::size_t j = 0; j < cn.size(); ++j) grad[d] += ai[cn[j]] * geo.grad[j][d];
      }
      const double norm = std::hypot(grad[0], grad[1]);
      if (norm == 0.0) continue;
      const double scale = geo.measure * std::pow(norm, model_.r - 2.0);
      for (std::size_t j = 0; j < cn.size(); ++j) {
        double dot = 0.0;
        for (int d = 0; d < n; ++d) dot += grad[d] * geo.grad[j][d];
        g[off + cn[j]] += scale * dot;
      }
    }
  }
  return g;
}

Eigen::SparseMatrix<double> DamageFunctional::hessian(const Eigen::VectorXd& a) const {
  const FESpace& space = *problem_.space;
  const auto rule = quadrature_rule(space.dim());
  const int n = space.dim();
  Triplets t;
  for (int i = 0; i < 2; ++i) {
    const int off = i * nodes_;
    const auto ai = a.segment(off, nodes_);
    std::size_t k = 0;
    for (int c = 0; c < space.num_cells(); ++c) {
      const CellGeometry& geo = space.geometry(c);
      auto cn = space.cell_nodes(c);
      const auto nc = cn.size();
      for (const QuadraturePoint& q : rule) {
        const double curv = strain_density_[i][k++] + 2.0 * model_.sigma2[i];
        for (std::size_t p = 0; p < nc; ++p) {
          for (std::size_t s = 0; s < nc; ++s) {
            t.emplace_back(off + cn[p], off + cn[s], q.weight * geo.measure * q.bary[p] * q.bary[s] * curv);
          }
        }
      }
      std::array<double, 2> grad{0.0, 0.0};
      for (int d = 0; d < n; ++d) {
        for (std::size_t j = 0; j < nc; ++j) grad[d] += ai[cn[j]] * geo.grad[j][d];
      }
      const double norm = std::hypot(grad[0], grad[1]);
      if (norm == 0.0) continue;
      // Hessian of |g|^r / r: |g|^(r-2) I + (r-2) |g|^(r-4) g g^T.
      const double iso = std::pow(norm, model_.r - 2.0);
      const double rank1 = (model_.r - 2.0) * std::pow(norm, model_.r - 4.0);
      for (std::size_t p = 0; p < nc; ++p) {
        for (std::size_t s = 0; s < nc; ++s) {
          double dot = 0.0;
          double gp = 0.0;
          double gs = 0.0;
          for (int d = 0; d < n; ++d) {
            dot += geo.grad[p][d] * geo.grad[s][d];
            gp += grad[d] * geo.grad[p][d];
            gs += grad[d] * geo.grad[s][d];
          }
          t.emplace_back(off + cn[p], off + cn[s], geo.measure * (iso * dot + rank1 * gp * gs));
        }
      }
    }
  }
  Eigen::SparseMatrix<double> out(size(), size());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// ---------------------------------------------------------------------------------------------

double shifted_energy_gap(const Problem& problem, const CohesiveDensity& density, double t, const FieldPair& ua,
                          const FieldPair& ub, const FEField& gamma, double theta, double mu) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0,1]");
  const FEField w = problem.loading.w(t);
  const FESpace& space = *problem.space;
  for (int a : space.dirichlet_nodes()) {
    for (int i = 0; i < 2; ++i) {
      if ((ua[i].node_value(a) - w.node_value(a)).norm() > 1e-12 * (1.0 + w.node_value(a).norm()) ||
          (ub[i].node_value(a) - w.node_value(a)).norm() > 1e-12 * (1.0 + w.node_value(a).norm())) {
        throw DomainError("shifted energy gap: fields do not carry the Dirichlet trace w(t)");
      }
    }
  }
  auto energy = [&](const FieldPair& v) {
    const auto e = elastic_energy(v, problem.tensors);
    return e[0] + e[1] + cohesive_energy(v, gamma, density);
  };
  const FieldPair mid{theta * ua[0] + (1.0 - theta) * ub[0], theta * ua[1] + (1.0 - theta) * ub[1]};
  const FieldPair diff{ua[0] - ub[0], ua[1] - ub[1]};
  const double norm = pair_h1_norm(diff);
  return theta * energy(ua) + (1.0 - theta) * energy(ub) - energy(mid) -
         0.5 * mu * theta * (1.0 - theta) * norm * norm;
}

double convexity_modulus(const Problem& problem, double korn) {
  const double c = std::min(coercivity_constant(problem.tensors[0]), coercivity_constant(problem.tensors[1]));
  return c / (korn * korn) - 2.0 * problem.law.lambda();
}

AprioriBound apriori_bound(const Problem& problem, double korn, int steps) {
  const double c = std::min(coercivity_constant(problem.tensors[0]), coercivity_constant(problem.tensors[1]));
  // Worst-case degradation factor for the competitor energy.
  const double deg = problem.damage ? 1.0 + std::max(problem.tensors[0].eta(), problem.tensors[1].eta()) : 1.0;
  AprioriBound out;
  const FEField& g = problem.loading.shape();
  const FieldPair gg{g, g};
  const auto eg = elastic_energy(gg, problem.tensors);
  const double e_shape = deg * (eg[0] + eg[1]);
  const double strain_shape = std::sqrt(2.0) * sym_grad_l2(g);
  const double h1_shape = std::sqrt(2.0) * h1_norm(g);
  for (int k = 0; k <= steps; ++k) {
    const double t = problem.loading.horizon() * k / steps;
    const double s = std::abs(problem.loading.schedule(t));
    const double energy = s * s * e_shape + problem.space->domain_measure() * problem.law.sup_psi();
    const double strain = std::sqrt(2.0 * energy / c);
    const double h1 = korn * (strain + s * strain_shape) + s * h1_shape;
    out.energy = std::max(out.energy, energy);
    out.h1 = std::max(out.h1, h1);
  }
  return out;
}

}  // namespace plateslip
