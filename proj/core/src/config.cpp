#include "homoclinic/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace homoclinic {

namespace {

using nlohmann::json;

int levenshtein(std::string_view a, std::string_view b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

[[noreturn]] void reject_unknown(const std::string& scope, const std::string& key,
                                 const std::vector<std::string>& known) {
  std::string best;
  int best_d = std::numeric_limits<int>::max();
  for (const auto& k : known) {
    const int d = levenshtein(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  std::string msg = "unknown key \"" + (scope.empty() ? key : scope + "." + key) + "\"";
  if (!best.empty() && best_d <= std::max<int>(2, static_cast<int>(key.size()) / 2))
    msg += "; did you mean \"" + best + "\"?";
  throw ConfigError(msg);
}

void check_keys(const json& obj, const std::string& scope,
                const std::vector<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      reject_unknown(scope, it.key(), known);
}

double get_number(const json& obj, const std::string& scope, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(scope + "." + key + " must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& scope, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(scope + "." + key + " must be an integer");
  return v.get<int>();
}

double require_positive(double v, const char* name) {
  if (!(v > 0)) throw ConfigError(std::string(name) + " must be positive");
  return v;
}

// Line/column of a byte offset, for parse errors.
std::pair<int, int> line_of(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return cfg;  // all defaults

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_of(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");

  check_keys(doc, "", {"problem", "grid", "solver", "check", "verify", "output"});

  if (doc.contains("problem")) {
    const json& p = doc.at("problem");
    check_keys(p, "problem", {"name", "a", "dim"});
    if (p.contains("name")) {
      if (!p.at("name").is_string()) throw ConfigError("problem.name must be a string");
      cfg.problem_name = p.at("name").get<std::string>();
    }
    cfg.problem_a = get_number(p, "problem", "a", cfg.problem_a);
    if (!(cfg.problem_a > 0)) throw ConfigError("problem.a must be positive");
    cfg.problem_dim = get_int(p, "problem", "dim", cfg.problem_dim);
    if (cfg.problem_dim < 1) throw ConfigError("problem.dim must be >= 1");
  }

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    check_keys(g, "grid", {"T", "n"});
    cfg.grid_T = get_number(g, "grid", "T", cfg.grid_T);
    if (!(cfg.grid_T > 0)) throw ConfigError("grid.T must be positive");
    cfg.grid_n = get_int(g, "grid", "n", cfg.grid_n);
    if (cfg.grid_n < 3) throw ConfigError("grid.n must be >= 3");
  }

  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    check_keys(s, "solver",
               {"tol", "inner_tol", "max_iter", "inner_max", "seed", "extra_starts",
                "dedupe_tol", "r_cap", "sphere_samples", "boundary_samples"});
    SolveConfig& sc = cfg.solver;
    sc.tol = require_positive(get_number(s, "solver", "tol", sc.tol), "solver.tol");
    sc.inner_tol =
        require_positive(get_number(s, "solver", "inner_tol", sc.inner_tol), "solver.inner_tol");
    sc.max_iter = get_int(s, "solver", "max_iter", sc.max_iter);
    if (sc.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
    sc.inner_max = get_int(s, "solver", "inner_max", sc.inner_max);
    if (sc.inner_max < 1) throw ConfigError("solver.inner_max must be >= 1");
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_integer() || s.at("seed").get<long long>() < 0)
        throw ConfigError("solver.seed must be a nonnegative integer");
      sc.seed = s.at("seed").get<std::uint64_t>();
    }
    sc.extra_starts = get_int(s, "solver", "extra_starts", sc.extra_starts);
    if (sc.extra_starts < 0) throw ConfigError("solver.extra_starts must be >= 0");
    sc.dedupe_tol =
        require_positive(get_number(s, "solver", "dedupe_tol", sc.dedupe_tol), "solver.dedupe_tol");
    sc.r_cap = require_positive(get_number(s, "solver", "r_cap", sc.r_cap), "solver.r_cap");
    sc.sphere_samples = get_int(s, "solver", "sphere_samples", sc.sphere_samples);
    if (sc.sphere_samples < 1) throw ConfigError("solver.sphere_samples must be >= 1");
    sc.boundary_samples = get_int(s, "solver", "boundary_samples", sc.boundary_samples);
    if (sc.boundary_samples < 1) throw ConfigError("solver.boundary_samples must be >= 1");
  }

  if (doc.contains("check")) {
    const json& c = doc.at("check");
    check_keys(c, "check", {"t_half_width", "samples", "l_tail_min"});
    SamplingPlan& plan = cfg.solver.plan;
    plan.t_half_width = require_positive(
        get_number(c, "check", "t_half_width", plan.t_half_width), "check.t_half_width");
    plan.count = get_int(c, "check", "samples", plan.count);
    if (plan.count < 2) throw ConfigError("check.samples must be >= 2");
    plan.l_tail_min = get_number(c, "check", "l_tail_min", plan.l_tail_min);
  }

  if (doc.contains("verify")) {
    const json& v = doc.at("verify");
    check_keys(v, "verify", {"residual_inf_tol", "tail_tol", "drift_tol", "domain_growth"});
    VerifyConfig& vc = cfg.verify;
    vc.residual_inf_tol =
        require_positive(get_number(v, "verify", "residual_inf_tol", vc.residual_inf_tol),
                         "verify.residual_inf_tol");
    vc.tail_tol =
        require_positive(get_number(v, "verify", "tail_tol", vc.tail_tol), "verify.tail_tol");
    vc.drift_tol =
        require_positive(get_number(v, "verify", "drift_tol", vc.drift_tol), "verify.drift_tol");
    vc.domain_growth = get_number(v, "verify", "domain_growth", vc.domain_growth);
    if (!(vc.domain_growth > 1.0)) throw ConfigError("verify.domain_growth must be > 1");
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    check_keys(o, "output", {"dir"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) throw ConfigError("output.dir must be a string");
      cfg.out_dir = o.at("dir").get<std::string>();
    }
  }

  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  if (path.empty()) return RunConfig{};
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

ProblemSpec make_problem(const RunConfig& cfg) {
  if (cfg.problem_name == "paper-example") return paper_example(cfg.problem_a, cfg.problem_dim);
  if (cfg.problem_name == "harmonic-oscillator") {
    const int dim = cfg.problem_dim;
    MatrixFunction L{dim, [dim](double t) -> Matrix {
                       return (t * t) * Matrix::Identity(dim, dim);
                     }};
    PotentialSpec pot;
    pot.dim = dim;
    pot.value = [](double, const Vector&) { return 0.0; };
    pot.gradient = [dim](double, const Vector&) -> Vector { return Vector::Zero(dim); };
    pot.even = true;
    return ProblemSpec{dim, std::move(L), std::move(pot)};
  }
  throw ConfigError("unknown problem \"" + cfg.problem_name +
                    "\"; known problems: paper-example, harmonic-oscillator");
}

}  // namespace homoclinic
