#pragma once

// Run configuration: JSON schema, defaults, validation, and problem construction.
//
// Units: lengths in the unit of the mesh box, Lamé moduli and kappa in energy per
// volume (kappa is an energy per interface area), rho in 1/length, time in the unit of T.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plateslip/mm_solver.hpp"
#include "plateslip/verification.hpp"

namespace plateslip {

struct MeshSpec {
  int dim = 2;
  std::array<int, 2> divisions{16, 16};
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};
  std::vector<Side> dirichlet{Side::Left};
};

struct MaterialSpec {
  double lambda = 0.0;
  double mu = 1.0;
  std::array<double, 2> lambda_grad{0.0, 0.0};
  std::array<double, 2> mu_grad{0.0, 0.0};
  [[nodiscard]] bool homogeneous() const {
    return lambda_grad == std::array<double, 2>{0.0, 0.0} && mu_grad == std::array<double, 2>{0.0, 0.0};
  }
};

struct LawSpec {
  LawKind kind = LawKind::Exponential;
  double kappa = 1.0;
  double rho = 1.0;      // Exponential
  double delta = 1.0;    // CubicCapped
  std::optional<double> lambda;  // defaults to the analytic bound
};

/// Affine map x -> M x + b (rows beyond n ignored).
struct AffineMap {
  std::array<std::array<double, 2>, 2> matrix{{{0.0, 0.0}, {0.0, 0.0}}};
  std::array<double, 2> offset{0.0, 0.0};
  [[nodiscard]] std::array<double, 2> operator()(const Point& x) const;
};

enum class LiftKind { Elastic, Affine };

struct LoadingSpec {
  Profile profile = Profile::Ramp;
  double amplitude = 1.0;
  double horizon = 1.0;
  double period = 0.5;   // cyclic only
  AffineMap trace;
  LiftKind lift = LiftKind::Elastic;
};

struct DamageSpec {
  bool enabled = false;
  double eta = 1e-3;
  std::array<double, 2> sigma1{1.0, 1.0};
  std::array<double, 2> sigma2{0.0, 0.0};
  double r = 3.0;
  double alpha0 = 0.0;
};

struct InitialSpec {
  bool zero = true;                       // u0 = 0 on both plates
  std::array<AffineMap, 2> plates{};      // used when zero is false
};

struct OutputSpec {
  int every_k = 1;
  bool csv = true;
  bool vtk = true;
  std::optional<int> probe_node;          // hysteresis probe; default: node with the largest final slip
};

struct RunConfig {
  MeshSpec mesh;
  std::array<MaterialSpec, 2> materials{};
  LawSpec law;
  LoadingSpec loading;
  SolverConfig solver;
  bool eps_from_default = true;           // eps resolved by the default rule
  DamageSpec damage;
  InitialSpec initial;
  OutputSpec output;
  VerifyOptions verify;
};

/// Parses JSON text; missing keys take defaults. Throws ConfigError listing every problem found.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Checks the schema invariants (T/tau integer, r > n, admissible Lamé pairs, ...).
void validate_config(const RunConfig& config);

/// eps = 0.05 * slip scale of the law (1 / rho or delta).
double default_eps(const LawSpec& law);

/// Fully resolved configuration as JSON (every field present). Round-trips through parse_config.
std::string resolved_config_json(const RunConfig& config);
/// Same, with a "derived" block holding K, mu, c_i and the convexity verdict.
std::string resolved_config_json(const RunConfig& config, const RunDiagnostics& diagnostics);

CohesiveLaw make_law(const LawSpec& spec);
/// Builds mesh, tensors, law, loading and damage model.
Problem build_problem(const RunConfig& config);
/// Initial displacement pair and, with damage, initial damage pair.
FieldPair initial_displacement(const RunConfig& config, const Problem& problem);
FieldPair initial_damage(const RunConfig& config, const Problem& problem);

}  // namespace plateslip
