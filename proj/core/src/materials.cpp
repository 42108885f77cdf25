#include "plateslip/materials.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "plateslip/errors.hpp"

namespace plateslip {

namespace {

std::vector<Point> box_corners(const Box& box) {
  if (box.dim == 1) return {box.lo, Point{box.hi[0], 0.0}};
  return {box.lo, Point{box.hi[0], box.lo[1]}, Point{box.lo[0], box.hi[1]}, box.hi};
}

double raw_coercivity(int dim, const LamePair& p) {
  return p.lambda >= 0.0 ? 2.0 * p.mu : dim * p.lambda + 2.0 * p.mu;
}

void check_admissible(int dim, const LamePair& p) {
  if (!(p.mu > 0.0) || !(dim * p.lambda + 2.0 * p.mu > 0.0)) {
    throw ConfigError("inadmissible Lamé pair (lambda=" + std::to_string(p.lambda) +
                      ", mu=" + std::to_string(p.mu) + "): need mu > 0 and n lambda + 2 mu > 0");
  }
}

}  // namespace

ElasticTensor::ElasticTensor(Kind kind, int dim, const LameAffine& lame, const Box& domain)
    : kind_(kind), dim_(dim), lame_(lame), domain_(domain) {
  if (dim != 1 && dim != 2) throw ConfigError("tensor dimension must be 1 or 2");
  domain_.dim = dim;
  for (const Point& corner : box_corners(domain_)) check_admissible(dim_, lame_at(corner));
}

ElasticTensor ElasticTensor::isotropic(int dim, double lame_lambda, double lame_mu) {
  LameAffine lame;
  lame.lambda0 = lame_lambda;
  lame.mu0 = lame_mu;
  Box box;
  box.dim = dim;
  return ElasticTensor(Kind::IsotropicHomogeneous, dim, lame, box);
}

ElasticTensor ElasticTensor::isotropic_field(int dim, const LameAffine& lame, const Box& domain) {
  return ElasticTensor(Kind::IsotropicField, dim, lame, domain);
}

ElasticTensor ElasticTensor::with_degradation(double eta) const {
  if (!(eta > 0.0)) throw ConfigError("residual stiffness eta must be positive");
  ElasticTensor copy = *this;
  copy.eta_ = eta;
  return copy;
}

LamePair ElasticTensor::lame_at(const Point& x) const {
  if (kind_ == Kind::IsotropicHomogeneous) return {lame_.lambda0, lame_.mu0};
  LamePair p{lame_.lambda0, lame_.mu0};
  for (int d = 0; d < dim_; ++d) {
    p.lambda += lame_.lambda_grad[d] * x[d];
    p.mu += lame_.mu_grad[d] * x[d];
  }
  return p;
}

double ElasticTensor::degradation(std::optional<double> alpha) const {
  if (!eta_) return 1.0;
  const double a = alpha.value_or(0.0);
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("damage value must lie in [0,1]");
  return *eta_ + (1.0 - a) * (1.0 - a);
}

double ElasticTensor::degradation_slope(double alpha) const {
  if (!eta_) return 0.0;
  return -2.0 * (1.0 - alpha);
}

SmallMat ElasticTensor::apply(const Point& x, std::optional<double> alpha, const SmallMat& A) const {
  if (alpha && !(*alpha >= 0.0 && *alpha <= 1.0)) throw DomainError("damage value must lie in [0,1]");
  const LamePair p = lame_at(x);
  const SmallMat sym = 0.5 * (A + A.transpose());
  SmallMat out = 2.0 * p.mu * sym;
  out.diagonal().array() += p.lambda * A.trace();
  return degradation(alpha) * out;
}

double ElasticTensor::contract(const Point& x, const SmallMat& A, const SmallMat& B) const {
  const LamePair p = lame_at(x);
  const SmallMat symA = 0.5 * (A + A.transpose());
  return p.lambda * A.trace() * B.trace() + 2.0 * p.mu * (symA.array() * B.array()).sum();
}

double coercivity_constant(const ElasticTensor& tensor) {
  double c = std::numeric_limits<double>::infinity();
  if (tensor.kind() == ElasticTensor::Kind::IsotropicHomogeneous) {
    c = raw_coercivity(tensor.dim(), tensor.lame_at(Point{0.0, 0.0}));
  } else {
    // Affine Lamé fields: the pointwise constant is concave in (lambda, mu) along
    // segments, so its minimum over the box sits at a corner.
    for (const Point& corner : box_corners(tensor.domain())) {
      c = std::min(c, raw_coercivity(tensor.dim(), tensor.lame_at(corner)));
    }
  }
  if (!(c > 0.0)) throw ConfigError("elastic tensor is not coercive");
  return tensor.damage_enabled() ? c * tensor.eta() : c;
}

KornEstimate estimate_korn_constant(const FESpace& space) {
  const int n = space.dim();
  const auto& free = space.free_nodes();
  if (space.dirichlet_nodes().empty()) throw DiscretizationError("Korn estimate needs Dirichlet nodes");
  if (free.empty()) return {1.0, 1.0, 0, 0.0};

  const Eigen::SparseMatrix<double> sym_full = assemble_sym_grad_gram(space);
  const Eigen::SparseMatrix<double> h1_full =
      Eigen::SparseMatrix<double>(assemble_mass(space, n) + assemble_grad_gram(space, n));

  // Restriction to the dofs of free nodes.
  const Eigen::Index m = static_cast<Eigen::Index>(free.size()) * n;
  Eigen::SparseMatrix<double> restrict(static_cast<Eigen::Index>(space.num_nodes()) * n, m);
  {
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t i = 0; i < free.size(); ++i) {
      for (int c = 0; c < n; ++c) t.emplace_back(free[i] * n + c, static_cast<Eigen::Index>(i) * n + c, 1.0);
    }
    restrict.setFromTriplets(t.begin(), t.end());
  }
  const Eigen::SparseMatrix<double> A = restrict.transpose() * sym_full * restrict;
  const Eigen::SparseMatrix<double> B = restrict.transpose() * h1_full * restrict;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) throw DiscretizationError("symmetric-gradient Gram matrix is singular");

  const Eigen::Index block = std::min<Eigen::Index>(8, m);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd X(m, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) X(i, j) = unif(rng);
  }

  KornEstimate est;
  double sigma_prev = std::numeric_limits<double>::infinity();
  int stable = 0;
  constexpr int kMaxIterations = 2000;
  for (int it = 1; it <= kMaxIterations; ++it) {
    Eigen::MatrixXd Y = solver.solve(B * X);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, block);
    const Eigen::MatrixXd Ar = Q.transpose() * (A * Q);
    const Eigen::MatrixXd Br = Q.transpose() * (B * Q);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(Ar, Br);
    X = Q * ritz.eigenvectors();
    const double sigma = ritz.eigenvalues()[0];
    const Eigen::VectorXd x = X.col(0);
    const Eigen::VectorXd r = A * x - sigma * (B * x);
    est.iterations = it;
    est.sigma_min = sigma;
    est.residual = r.norm() / (B * x).norm();
    if (std::abs(sigma - sigma_prev) <= 1e-15 * sigma && est.residual <= 1e-9) {
      if (++stable >= 2) break;
    } else {
      stable = 0;
    }
    sigma_prev = sigma;
    if (it == kMaxIterations) throw NumericalError("Korn eigenvalue iteration did not converge");
  }
  est.constant = 1.0 / std::sqrt(est.sigma_min);
  return est;
}

double convexity_threshold(double c1, double c2, double korn) {
  if (!(korn > 0.0)) throw DomainError("Korn constant must be positive");
  return std::min(c1, c2) / (2.0 * korn * korn);
}

}  // namespace plateslip
