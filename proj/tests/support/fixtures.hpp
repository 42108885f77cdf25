#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "plateslip/config.hpp"

namespace plateslip::testing {

inline std::string config_path(const std::string& name) {
  return (std::filesystem::path(PLATESLIP_CONFIG_DIR) / name).string();
}

inline std::string golden_path(const std::string& name) {
  return (std::filesystem::path(PLATESLIP_GOLDEN_DIR) / name).string();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("plateslip_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Two bars on [0, 1] clamped at both ends, 5 cells (8 interior dofs), affine shear moduli
/// drawn from [0.5, 1.5], lambda = 0. With psi = 0.1 (1 - exp(-2 z)) the curvature bound
/// 0.4 sits below the convexity threshold.
inline RunConfig tiny_bar_config(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mu(0.5, 1.5);
  RunConfig c;
  c.mesh.dim = 1;
  c.mesh.divisions = {5, 1};
  c.mesh.lo = {0.0, 0.0};
  c.mesh.hi = {1.0, 0.0};
  c.mesh.dirichlet = {Side::Left, Side::Right};
  for (auto& m : c.materials) {
    const double m0 = mu(rng);
    const double m1 = mu(rng);
    m.lambda = 0.0;
    m.mu = m0;
    m.mu_grad = {m1 - m0, 0.0};
  }
  c.law.kind = LawKind::Exponential;
  c.law.kappa = 0.1;
  c.law.rho = 2.0;
  c.loading.amplitude = 0.5 + std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  c.loading.trace.matrix = {{{1.0, 0.0}, {0.0, 0.0}}};
  c.loading.lift = LiftKind::Affine;
  c.solver.tau = 0.25;
  c.solver.eps = 0.02;
  c.eps_from_default = false;
  return c;
}

}  // namespace plateslip::testing
