#include "plateslip/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "plateslip/errors.hpp"

namespace plateslip {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string to_string(LawKind k) { return k == LawKind::Exponential ? "exponential" : "cubic_capped"; }
std::string to_string(LiftKind k) { return k == LiftKind::Elastic ? "elastic" : "affine"; }

// Reads a JSON document while collecting every schema problem instead of stopping at the first.
class Reader {
 public:
  std::vector<std::string> errors;

  void allow(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) {
      errors.push_back(path + ": expected an object");
      return;
    }
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& item : obj.items()) {
      if (!known.count(item.key())) errors.push_back(path + "." + item.key() + ": unknown key");
    }
  }

  template <class T>
  void read(const json& obj, const char* key, const std::string& path, T& out) {
    if (!obj.is_object() || !obj.contains(key) || obj[key].is_null()) return;
    try {
      out = obj[key].get<T>();
    } catch (const json::exception&) {
      errors.push_back(path + "." + key + ": wrong type (got " + obj[key].dump() + ")");
    }
  }

  void read_map(const json& obj, const char* key, const std::string& path, AffineMap& out) {
    if (!obj.is_object() || !obj.contains(key)) return;
    const json& m = obj[key];
    allow(m, path + "." + key, {"matrix", "offset"});
    read(m, "matrix", path + "." + key, out.matrix);
    read(m, "offset", path + "." + key, out.offset);
  }

  const json& child(const json& obj, const char* key) {
    static const json empty = json::object();
    if (obj.is_object() && obj.contains(key) && !obj[key].is_null()) return obj[key];
    return empty;
  }
};

ordered_json map_json(const AffineMap& m) { return {{"matrix", m.matrix}, {"offset", m.offset}}; }

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["schema"] = "plateslip.config/1";
  std::vector<std::string> sides;
  for (Side s : c.mesh.dirichlet) sides.push_back(to_string(s));
  j["mesh"] = {{"dim", c.mesh.dim},
               {"divisions", c.mesh.divisions},
               {"lo", c.mesh.lo},
               {"hi", c.mesh.hi},
               {"dirichlet", sides}};
  ordered_json mats = ordered_json::array();
  for (const auto& m : c.materials) {
    mats.push_back({{"lambda", m.lambda}, {"mu", m.mu}, {"lambda_grad", m.lambda_grad}, {"mu_grad", m.mu_grad}});
  }
  j["materials"] = mats;
  const CohesiveLaw law = make_law(c.law);
  j["law"] = {{"kind", to_string(c.law.kind)},
              {"kappa", c.law.kappa},
              {"rho", c.law.rho},
              {"delta", c.law.delta},
              {"lambda", c.law.lambda.value_or(law.analytic_lambda())}};
  j["loading"] = {{"profile", to_string(c.loading.profile)},
                  {"amplitude", c.loading.amplitude},
                  {"horizon", c.loading.horizon},
                  {"period", c.loading.period},
                  {"trace", map_json(c.loading.trace)},
                  {"lift", to_string(c.loading.lift)}};
  const SolverConfig& s = c.solver;
  j["solver"] = {{"tau", s.tau},
                 {"eps", s.eps},
                 {"inner_tol", s.inner_tol},
                 {"max_newton", s.max_newton},
                 {"max_gradient_steps", s.max_gradient_steps},
                 {"armijo", s.armijo},
                 {"backtrack", s.backtrack},
                 {"max_backtracks", s.max_backtracks},
                 {"max_sweeps", s.max_sweeps},
                 {"sweep_tol", s.sweep_tol},
                 {"initial_tol", s.initial_tol},
                 {"adopt_initial", s.adopt_initial}};
  j["damage"] = {{"enabled", c.damage.enabled},
                 {"eta", c.damage.eta},
                 {"sigma1", c.damage.sigma1},
                 {"sigma2", c.damage.sigma2},
                 {"r", c.damage.r},
                 {"alpha0", c.damage.alpha0}};
  if (c.initial.zero) {
    j["initial"] = {{"kind", "zero"}};
  } else {
    j["initial"] = {{"kind", "affine"}, {"plates", {map_json(c.initial.plates[0]), map_json(c.initial.plates[1])}}};
  }
  j["output"] = {{"every_k", c.output.every_k}, {"csv", c.output.csv}, {"vtk", c.output.vtk}};
  j["output"]["probe_node"] = c.output.probe_node ? ordered_json(*c.output.probe_node) : ordered_json(nullptr);
  j["verify"] = {{"seed", c.verify.seed},
                 {"competitors", c.verify.competitors},
                 {"convexity_samples", c.verify.convexity_samples},
                 {"eb_tol", c.verify.eb_tol},
                 {"gs_tol", c.verify.gs_tol},
                 {"el_tol", c.verify.el_tol},
                 {"convexity_tol", c.verify.convexity_tol}};
  return j;
}

}  // namespace

std::array<double, 2> AffineMap::operator()(const Point& x) const {
  return {matrix[0][0] * x[0] + matrix[0][1] * x[1] + offset[0], matrix[1][0] * x[0] + matrix[1][1] * x[1] + offset[1]};
}

double default_eps(const LawSpec& law) {
  const double slip_scale = law.kind == LawKind::Exponential ? 1.0 / law.rho : law.delta;
  return 0.05 * slip_scale;
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  Reader r;
  r.allow(root, "$", {"schema", "mesh", "materials", "law", "loading", "solver", "damage", "initial", "output",
                      "verify", "derived", "comment"});
  if (root.is_object() && root.contains("schema") && root["schema"] != "plateslip.config/1") {
    r.errors.push_back("$.schema: unsupported schema " + root["schema"].dump());
  }

  const json& mesh = r.child(root, "mesh");
  r.allow(mesh, "$.mesh", {"dim", "divisions", "lo", "hi", "dirichlet"});
  r.read(mesh, "dim", "$.mesh", c.mesh.dim);
  if (mesh.contains("divisions") && mesh["divisions"].is_number_integer()) {
    c.mesh.divisions = {mesh["divisions"].get<int>(), mesh["divisions"].get<int>()};
  } else {
    r.read(mesh, "divisions", "$.mesh", c.mesh.divisions);
  }
  r.read(mesh, "lo", "$.mesh", c.mesh.lo);
  r.read(mesh, "hi", "$.mesh", c.mesh.hi);
  if (mesh.contains("dirichlet")) {
    std::vector<std::string> names;
    r.read(mesh, "dirichlet", "$.mesh", names);
    c.mesh.dirichlet.clear();
    for (const auto& name : names) {
      try {
        c.mesh.dirichlet.push_back(side_from_string(name));
      } catch (const std::exception& e) {
        r.errors.push_back("$.mesh.dirichlet: " + std::string(e.what()));
      }
    }
  }

  if (root.is_object() && root.contains("materials")) {
    const json& mats = root["materials"];
    if (!mats.is_array() || (mats.size() != 1 && mats.size() != 2)) {
      r.errors.push_back("$.materials: expected an array with one or two layers");
    } else {
      for (std::size_t i = 0; i < 2; ++i) {
        const json& m = mats[std::min(i, mats.size() - 1)];
        const std::string path = "$.materials[" + std::to_string(i) + "]";
        r.allow(m, path, {"lambda", "mu", "lambda_grad", "mu_grad"});
        r.read(m, "lambda", path, c.materials[i].lambda);
        r.read(m, "mu", path, c.materials[i].mu);
        r.read(m, "lambda_grad", path, c.materials[i].lambda_grad);
        r.read(m, "mu_grad", path, c.materials[i].mu_grad);
      }
    }
  }

  const json& law = r.child(root, "law");
  r.allow(law, "$.law", {"kind", "kappa", "rho", "delta", "lambda"});
  std::string kind = "exponential";
  r.read(law, "kind", "$.law", kind);
  if (kind == "exponential") {
    c.law.kind = LawKind::Exponential;
  } else if (kind == "cubic_capped") {
    c.law.kind = LawKind::CubicCapped;
  } else {
    r.errors.push_back("$.law.kind: expected exponential or cubic_capped, got " + kind);
  }
  r.read(law, "kappa", "$.law", c.law.kappa);
  r.read(law, "rho", "$.law", c.law.rho);
  r.read(law, "delta", "$.law", c.law.delta);
  if (law.contains("lambda") && !law["lambda"].is_null()) {
    double v = 0.0;
    r.read(law, "lambda", "$.law", v);
    c.law.lambda = v;
  }

  const json& load = r.child(root, "loading");
  r.allow(load, "$.loading", {"profile", "amplitude", "horizon", "period", "trace", "lift"});
  std::string profile = "ramp";
  r.read(load, "profile", "$.loading", profile);
  try {
    c.loading.profile = profile_from_string(profile);
  } catch (const std::exception& e) {
    r.errors.push_back("$.loading.profile: " + std::string(e.what()));
  }
  r.read(load, "amplitude", "$.loading", c.loading.amplitude);
  r.read(load, "horizon", "$.loading", c.loading.horizon);
  r.read(load, "period", "$.loading", c.loading.period);
  r.read_map(load, "trace", "$.loading", c.loading.trace);
  std::string lift = "elastic";
  r.read(load, "lift", "$.loading", lift);
  if (lift == "elastic") {
    c.loading.lift = LiftKind::Elastic;
  } else if (lift == "affine") {
    c.loading.lift = LiftKind::Affine;
  } else {
    r.errors.push_back("$.loading.lift: expected elastic or affine, got " + lift);
  }

  const json& solver = r.child(root, "solver");
  r.allow(solver, "$.solver", {"tau", "eps", "inner_tol", "max_newton", "max_gradient_steps", "armijo", "backtrack",
                               "max_backtracks", "max_sweeps", "sweep_tol", "initial_tol", "adopt_initial"});
  c.solver.tau = c.loading.horizon / 64.0;
  r.read(solver, "tau", "$.solver", c.solver.tau);
  c.eps_from_default = !(solver.contains("eps") && !solver["eps"].is_null());
  c.solver.eps = default_eps(c.law);
  r.read(solver, "eps", "$.solver", c.solver.eps);
  r.read(solver, "inner_tol", "$.solver", c.solver.inner_tol);
  r.read(solver, "max_newton", "$.solver", c.solver.max_newton);
  r.read(solver, "max_gradient_steps", "$.solver", c.solver.max_gradient_steps);
  r.read(solver, "armijo", "$.solver", c.solver.armijo);
  r.read(solver, "backtrack", "$.solver", c.solver.backtrack);
  r.read(solver, "max_backtracks", "$.solver", c.solver.max_backtracks);
  r.read(solver, "max_sweeps", "$.solver", c.solver.max_sweeps);
  r.read(solver, "sweep_tol", "$.solver", c.solver.sweep_tol);
  r.read(solver, "initial_tol", "$.solver", c.solver.initial_tol);
  r.read(solver, "adopt_initial", "$.solver", c.solver.adopt_initial);

  const json& dmg = r.child(root, "damage");
  r.allow(dmg, "$.damage", {"enabled", "eta", "sigma1", "sigma2", "r", "alpha0"});
  r.read(dmg, "enabled", "$.damage", c.damage.enabled);
  r.read(dmg, "eta", "$.damage", c.damage.eta);
  r.read(dmg, "sigma1", "$.damage", c.damage.sigma1);
  r.read(dmg, "sigma2", "$.damage", c.damage.sigma2);
  r.read(dmg, "r", "$.damage", c.damage.r);
  r.read(dmg, "alpha0", "$.damage", c.damage.alpha0);
  c.solver.damage = c.damage.enabled;

  const json& init = r.child(root, "initial");
  r.allow(init, "$.initial", {"kind", "plates"});
  std::string ikind = "zero";
  r.read(init, "kind", "$.initial", ikind);
  if (ikind == "zero") {
    c.initial.zero = true;
  } else if (ikind == "affine") {
    c.initial.zero = false;
    if (!init.contains("plates") || !init["plates"].is_array() || init["plates"].size() != 2) {
      r.errors.push_back("$.initial.plates: expected two affine maps");
    } else {
      for (int i = 0; i < 2; ++i) {
        const json holder = {{"map", init["plates"][i]}};
        r.read_map(holder, "map", "$.initial.plates[" + std::to_string(i) + "]", c.initial.plates[i]);
      }
    }
  } else {
    r.errors.push_back("$.initial.kind: expected zero or affine, got " + ikind);
  }

  const json& out = r.child(root, "output");
  r.allow(out, "$.output", {"every_k", "csv", "vtk", "probe_node"});
  r.read(out, "every_k", "$.output", c.output.every_k);
  r.read(out, "csv", "$.output", c.output.csv);
  r.read(out, "vtk", "$.output", c.output.vtk);
  if (out.contains("probe_node") && !out["probe_node"].is_null()) {
    int node = 0;
    r.read(out, "probe_node", "$.output", node);
    c.output.probe_node = node;
  }

  const json& ver = r.child(root, "verify");
  r.allow(ver, "$.verify", {"seed", "competitors", "convexity_samples", "eb_tol", "gs_tol", "el_tol",
                            "convexity_tol"});
  r.read(ver, "seed", "$.verify", c.verify.seed);
  r.read(ver, "competitors", "$.verify", c.verify.competitors);
  r.read(ver, "convexity_samples", "$.verify", c.verify.convexity_samples);
  if (!(ver.contains("eb_tol") && !ver["eb_tol"].is_null())) c.verify.eb_tol = 10.0 * c.solver.inner_tol;
  r.read(ver, "eb_tol", "$.verify", c.verify.eb_tol);
  r.read(ver, "gs_tol", "$.verify", c.verify.gs_tol);
  r.read(ver, "el_tol", "$.verify", c.verify.el_tol);
  r.read(ver, "convexity_tol", "$.verify", c.verify.convexity_tol);

  if (!r.errors.empty()) {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& e : r.errors) os << "\n  " << e;
    throw ConfigError(os.str());
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const RunConfig& c) {
  std::vector<std::string> errors;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  const int n = c.mesh.dim;
  require(n == 1 || n == 2, "$.mesh.dim: must be 1 or 2");
  require(c.mesh.divisions[0] >= 1 && (n == 1 || c.mesh.divisions[1] >= 1), "$.mesh.divisions: must be >= 1");
  require(c.mesh.hi[0] > c.mesh.lo[0] && (n == 1 || c.mesh.hi[1] > c.mesh.lo[1]), "$.mesh: empty box");
  require(!c.mesh.dirichlet.empty(), "$.mesh.dirichlet: at least one Dirichlet side is required");
  for (Side s : c.mesh.dirichlet) {
    require(n == 2 || s == Side::Left || s == Side::Right, "$.mesh.dirichlet: only left/right exist in 1D");
  }
  for (int i = 0; i < 2; ++i) {
    const auto& m = c.materials[i];
    // Admissibility on the box corners, where affine Lamé fields take their extremes.
    for (double x : {c.mesh.lo[0], c.mesh.hi[0]}) {
      for (double y : {c.mesh.lo[1], n == 2 ? c.mesh.hi[1] : c.mesh.lo[1]}) {
        const double lam = m.lambda + m.lambda_grad[0] * x + m.lambda_grad[1] * y;
        const double mu = m.mu + m.mu_grad[0] * x + m.mu_grad[1] * y;
        require(mu > 0.0 && n * lam + 2.0 * mu > 0.0,
                "$.materials[" + std::to_string(i) + "]: need mu > 0 and n lambda + 2 mu > 0 on the whole box");
      }
    }
  }
  require(c.law.kappa > 0.0, "$.law.kappa: must be positive");
  require(c.law.kind != LawKind::Exponential || c.law.rho > 0.0, "$.law.rho: must be positive");
  require(c.law.kind != LawKind::CubicCapped || c.law.delta > 0.0, "$.law.delta: must be positive");
  if (c.law.lambda && errors.empty()) {
    require(*c.law.lambda >= make_law(LawSpec{c.law.kind, c.law.kappa, c.law.rho, c.law.delta, std::nullopt})
                                   .analytic_lambda() * (1.0 - 1e-12),
            "$.law.lambda: below the analytic curvature bound of the law");
  }
  require(c.loading.horizon > 0.0, "$.loading.horizon: must be positive");
  require(c.loading.profile != Profile::Cyclic || c.loading.period > 0.0, "$.loading.period: must be positive");
  require(c.solver.tau > 0.0, "$.solver.tau: must be positive");
  if (c.solver.tau > 0.0 && c.loading.horizon > 0.0) {
    const double ratio = c.loading.horizon / c.solver.tau;
    require(std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio && std::round(ratio) >= 1.0,
            "$.solver.tau: T / tau must be a positive integer");
  }
  require(c.solver.eps > 0.0, "$.solver.eps: must be positive");
  require(c.solver.inner_tol > 0.0 && c.solver.sweep_tol > 0.0 && c.solver.initial_tol > 0.0,
          "$.solver: tolerances must be positive");
  require(c.solver.armijo > 0.0 && c.solver.armijo < 0.5, "$.solver.armijo: must lie in (0, 0.5)");
  require(c.solver.backtrack > 0.0 && c.solver.backtrack < 1.0, "$.solver.backtrack: must lie in (0, 1)");
  require(c.solver.max_newton >= 0 && c.solver.max_gradient_steps >= 0 && c.solver.max_sweeps >= 1 &&
              c.solver.max_backtracks >= 1,
          "$.solver: iteration limits must be nonnegative");
  if (c.damage.enabled) {
    require(c.damage.r > n, "$.damage.r: must exceed the dimension n");
    require(c.damage.eta > 0.0, "$.damage.eta: must be positive");
    require(c.damage.alpha0 >= 0.0 && c.damage.alpha0 <= 1.0, "$.damage.alpha0: must lie in [0, 1]");
    for (int i = 0; i < 2; ++i) {
      require(c.damage.sigma1[i] >= 0.0 && c.damage.sigma2[i] >= 0.0, "$.damage.sigma: must be nonnegative");
    }
  }
  require(c.output.every_k >= 1, "$.output.every_k: must be >= 1");
  require(c.verify.competitors >= 0 && c.verify.convexity_samples >= 0, "$.verify: counts must be nonnegative");
  if (!errors.empty()) {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& e : errors) os << "\n  " << e;
    throw ConfigError(os.str());
  }
}

std::string resolved_config_json(const RunConfig& config) { return config_json(config).dump(2) + "\n"; }

std::string resolved_config_json(const RunConfig& config, const RunDiagnostics& d) {
  ordered_json j = config_json(config);
  j["derived"] = {{"korn_constant", d.korn},
                  {"convexity_modulus", d.mu},
                  {"coercivity", d.coercivity},
                  {"lambda_threshold", d.lambda_threshold},
                  {"hypothesis_holds", d.certified},
                  {"apriori_energy_bound", d.apriori.energy},
                  {"apriori_h1_bound", d.apriori.h1}};
  return j.dump(2) + "\n";
}

CohesiveLaw make_law(const LawSpec& spec) {
  CohesiveLaw law = spec.kind == LawKind::Exponential ? CohesiveLaw::exponential(spec.kappa, spec.rho)
                                                      : CohesiveLaw::cubic_capped(spec.kappa, spec.delta);
  return spec.lambda ? law.with_lambda(*spec.lambda) : law;
}

Problem build_problem(const RunConfig& c) {
  validate_config(c);
  const int n = c.mesh.dim;
  Box box;
  box.dim = n;
  box.lo = c.mesh.lo;
  box.hi = c.mesh.hi;
  if (n == 1) box.lo[1] = box.hi[1] = 0.0;
  auto space = std::make_shared<const FESpace>(build_box_mesh(n, c.mesh.divisions, c.mesh.dirichlet, box));

  auto tensor = [&](const MaterialSpec& m) {
    LameAffine lame;
    lame.lambda0 = m.lambda;
    lame.mu0 = m.mu;
    lame.lambda_grad = m.lambda_grad;
    lame.mu_grad = m.mu_grad;
    ElasticTensor t = m.homogeneous() ? ElasticTensor::isotropic(n, m.lambda, m.mu)
                                      : ElasticTensor::isotropic_field(n, lame, box);
    return c.damage.enabled ? t.with_degradation(c.damage.eta) : t;
  };
  TensorPair tensors{tensor(c.materials[0]), tensor(c.materials[1])};

  const AffineMap trace = c.loading.trace;
  const FieldFunction f = [trace](const Point& x) { return trace(x); };
  FEField shape = c.loading.lift == LiftKind::Elastic ? minimal_energy_lift(space, tensors, f)
                                                      : analytic_lift(space, f);
  LoadingProgram loading(c.loading.profile, c.loading.amplitude, c.loading.horizon, shape,
                         c.loading.profile == Profile::Cyclic ? c.loading.period : 0.0);
  std::optional<DamageModel> damage;
  if (c.damage.enabled) damage = DamageModel{c.damage.sigma1, c.damage.sigma2, c.damage.r};
  return Problem{space, tensors, make_law(c.law), loading, damage};
}

FieldPair initial_displacement(const RunConfig& c, const Problem& problem) {
  if (c.initial.zero) return zero_pair(problem.space, problem.dim());
  FieldPair u;
  for (int i = 0; i < 2; ++i) {
    const AffineMap m = c.initial.plates[i];
    u[i] = interpolate([m](const Point& x) { return m(x); }, problem.space, problem.dim());
  }
  return u;
}

FieldPair initial_damage(const RunConfig& c, const Problem& problem) {
  FieldPair a = zero_pair(problem.space, 1);
  for (auto& ai : a) ai.coeffs().setConstant(c.damage.alpha0);
  return a;
}

}  // namespace plateslip
