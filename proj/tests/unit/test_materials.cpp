#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "plateslip/energies.hpp"
#include "plateslip/errors.hpp"
#include "plateslip/materials.hpp"

using namespace plateslip;

namespace {

SmallMat random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  SmallMat A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = g(rng);
  }
  return A;
}

double frob(const SmallMat& A, const SmallMat& B) { return (A.array() * B.array()).sum(); }

// Dense reference: smallest generalized eigenvalue of (e-Gram, H1-Gram) on interior dofs.
double dense_korn(const FESpace& space) {
  const int n = space.dim();
  const Eigen::MatrixXd E = Eigen::MatrixXd(assemble_sym_grad_gram(space));
  const Eigen::MatrixXd H = Eigen::MatrixXd(assemble_mass(space, n)) + Eigen::MatrixXd(assemble_grad_gram(space, n));
  std::vector<int> dofs;
  for (int a : space.free_nodes()) {
    for (int c = 0; c < n; ++c) dofs.push_back(a * n + c);
  }
  const auto m = static_cast<Eigen::Index>(dofs.size());
  Eigen::MatrixXd Er(m, m), Hr(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      Er(i, j) = E(dofs[i], dofs[j]);
      Hr(i, j) = H(dofs[i], dofs[j]);
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Er, Hr);
  return 1.0 / std::sqrt(es.eigenvalues()(0));
}

}  // namespace

TEST_CASE("isotropic application") {
  const auto C = ElasticTensor::isotropic(2, 1.0, 1.0);
  const Point x{0.3, 0.4};
  CHECK(C.apply(x, std::nullopt, SmallMat::Zero(2, 2)).norm() == 0.0);
  const SmallMat out = C.apply(x, std::nullopt, SmallMat::Identity(2, 2));
  CHECK((out - 4.0 * SmallMat::Identity(2, 2)).norm() == 0.0);
  const auto D = C.with_degradation(1e-3);
  const SmallMat A = (SmallMat(2, 2) << 1.0, 2.0, -0.5, 3.0).finished();
  CHECK((D.apply(x, 1.0, A) - 1e-3 * C.apply(x, std::nullopt, A)).norm() <= 1e-16);
  CHECK((D.apply(x, 0.0, A) - (1.0 + 1e-3) * C.apply(x, std::nullopt, A)).norm() <= 1e-14);
  CHECK_THROWS_AS((void)D.apply(x, 1.5, A), DomainError);
  CHECK_THROWS_AS((void)D.apply(x, -0.1, A), DomainError);
}

TEST_CASE("coercivity constants") {
  CHECK(coercivity_constant(ElasticTensor::isotropic(2, 1.0, 1.0)) == 2.0);
  CHECK(coercivity_constant(ElasticTensor::isotropic(2, -0.5, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(coercivity_constant(ElasticTensor::isotropic(2, 1.0, 1.0).with_degradation(1e-3)) ==
        doctest::Approx(2e-3).epsilon(1e-15));
  CHECK_THROWS_AS((void)ElasticTensor::isotropic(2, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS((void)ElasticTensor::isotropic(2, -1.0, 0.9), ConfigError);
}

TEST_CASE("symmetries, coercivity and Legendre-Hadamard on random matrices") {
  std::mt19937_64 rng(7);
  const Box box{2, {0.0, 0.0}, {1.0, 1.0}};
  const std::vector<ElasticTensor> tensors{
      ElasticTensor::isotropic(2, 3.0, 0.7), ElasticTensor::isotropic(2, -0.6, 1.0),
      ElasticTensor::isotropic_field(2, LameAffine{-0.2, 1.0, {0.1, 0.0}, {0.5, -0.3}}, box),
      ElasticTensor::isotropic(1, 0.0, 0.8)};
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (const auto& C : tensors) {
    const int n = C.dim();
    const double c = coercivity_constant(C);
    for (int trial = 0; trial < 1000; ++trial) {
      const Point x{u01(rng), n == 2 ? u01(rng) : 0.0};
      const SmallMat A = random_matrix(rng, n);
      const SmallMat B = random_matrix(rng, n);
      const SmallMat As = 0.5 * (A + A.transpose());
      const SmallMat CA = C.apply(x, std::nullopt, A);
      const double scale = 1.0 + CA.norm() * B.norm();
      CHECK(std::abs(frob(CA, B) - frob(C.apply(x, std::nullopt, B), A)) <= 1e-12 * scale);
      CHECK((CA - CA.transpose()).norm() <= 1e-12 * scale);
      CHECK((CA - C.apply(x, std::nullopt, As)).norm() <= 1e-12 * scale);
      CHECK(frob(CA, A) >= c * As.squaredNorm() - 1e-12 * scale);
      CHECK(std::abs(C.contract(x, A, B) - frob(CA, B)) <= 1e-12 * scale);
      const SmallVec a = random_matrix(rng, n).col(0);
      const SmallVec b = random_matrix(rng, n).col(0);
      const SmallMat ab = a * b.transpose();
      CHECK(frob(C.apply(x, std::nullopt, ab), ab) >= 0.5 * c * ab.squaredNorm() - 1e-12 * (1.0 + ab.squaredNorm()));
    }
  }
}

TEST_CASE("Korn constant matches a dense generalized eigensolver") {
  for (auto [dim, div, sides] : {std::tuple{2, 6, std::vector<Side>{Side::Left}},
                                 std::tuple{2, 5, std::vector<Side>{Side::Bottom, Side::Right}},
                                 std::tuple{1, 5, std::vector<Side>{Side::Left, Side::Right}},
                                 std::tuple{1, 9, std::vector<Side>{Side::Left}}}) {
    const FESpace space(build_box_mesh(dim, {div, div}, sides));
    const KornEstimate k = estimate_korn_constant(space);
    CHECK(k.constant >= 1.0);
    CHECK(k.constant == doctest::Approx(dense_korn(space)).epsilon(1e-9));
  }
}

TEST_CASE("Korn constant certifies random constrained fields") {
  auto space = std::make_shared<const FESpace>(build_box_mesh(2, {8, 8}, {Side::Left}));
  const double K = estimate_korn_constant(*space).constant;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    FEField v(space, 2);
    for (int a : space->free_nodes()) {
      v.at(a, 0) = g(rng);
      v.at(a, 1) = g(rng);
    }
    CHECK(h1_norm(v) <= K * sym_grad_l2(v) * (1.0 + 1e-10));
  }
}

TEST_CASE("convexity threshold") {
  CHECK(convexity_threshold(2.0, 3.0, 2.0) == doctest::Approx(0.25));
  CHECK_THROWS((void)convexity_threshold(2.0, 3.0, 0.0));
}
