#include "homoclinic/run.hpp"

#include "homoclinic/jsonio.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>

namespace homoclinic {

namespace fs = std::filesystem;

std::optional<Command> command_from_name(std::string_view name) {
  if (name == "check") return Command::check;
  if (name == "spectrum") return Command::spectrum;
  if (name == "solve") return Command::solve;
  if (name == "multi-solve") return Command::multi_solve;
  if (name == "verify") return Command::verify;
  return std::nullopt;
}

void apply_thread_cap() {
  const char* cap = std::getenv("HOMOCLINIC_THREADS");
  const int overwrite = cap ? 1 : 0;
  const char* value = cap ? cap : "1";
  setenv("OPENBLAS_NUM_THREADS", value, overwrite);
  setenv("OMP_NUM_THREADS", value, overwrite);
  setenv("MKL_NUM_THREADS", value, overwrite);
}

namespace {

void geometry_json(JsonWriter& w, const LinkingGeometry& geo) {
  w.begin_object();
  w.key("rho");
  w.value(geo.rho);
  w.key("alpha_hat");
  w.value(geo.alpha_hat);
  w.key("R");
  w.value(geo.R);
  w.key("sup_boundary");
  w.value(geo.sup_boundary);
  w.end_object();
}

std::string solution_csv(const StateVector& u) {
  std::vector<std::string> header{"t"};
  for (int a = 0; a < u.grid.N; ++a) header.push_back("u_" + std::to_string(a + 1));
  CsvWriter csv(std::move(header));
  std::vector<double> row(u.grid.N + 1);
  for (int i = 0; i < u.grid.n; ++i) {
    row[0] = u.grid.node(i);
    for (int a = 0; a < u.grid.N; ++a) row[a + 1] = u.node(i)(a);
    csv.row(row);
  }
  return csv.str();
}

std::string history_csv(const std::vector<HistoryEntry>& hist) {
  CsvWriter csv({"iteration", "phi", "grad_norm"});
  for (const auto& e : hist)
    csv.raw_row({std::to_string(e.iteration), format_double(e.phi), format_double(e.grad_norm)});
  return csv.str();
}

void solve_report_json(JsonWriter& w, const SolveReport& rep) {
  w.begin_object();
  w.key("status");
  w.value(to_string(rep.status));
  w.key("critical_value");
  w.value(rep.critical_value);
  w.key("grad_norm");
  w.value(rep.grad_norm);
  w.key("iterations");
  w.value(rep.iterations);
  w.key("geometry");
  geometry_json(w, rep.geometry);
  w.end_object();
}

void run_check(const RunConfig& cfg, const fs::path& out) {
  const ProblemSpec spec = make_problem(cfg);
  ConditionReport rep = check_conditions(spec, cfg.solver.plan);

  const Grid grid = build_grid(cfg.grid_T, cfg.grid_n, spec.dim);
  const SpectralDecomposition dec = eigendecompose(assemble_operator(spec, grid));
  const SubspaceSplit split = classify(dec, dec.zero_tol, rep.m0);
  complete_report(rep, dec, split, cfg.solver.seed);

  CsvWriter samples({"t", "l"});
  for (const auto& [t, l] : rep.l_samples) samples.row({t, l});
  write_file((out / "l_samples.csv").string(), samples.str());

  JsonWriter w;
  w.begin_object();
  w.key("L1_plausible");
  w.value(rep.L1_plausible);
  w.key("L2_estimate");
  if (rep.L2_estimate) {
    w.begin_object();
    w.key("a");
    w.value(rep.L2_estimate->first);
    w.key("r_bar");
    w.value(rep.L2_estimate->second);
    w.end_object();
  } else {
    w.null_value();
  }
  w.key("W1_smallness");
  w.begin_array();
  for (const auto& [mag, ratio] : rep.W1_smallness) {
    w.begin_object();
    w.key("u_mag");
    w.value(mag);
    w.key("ratio");
    w.value(ratio);
    w.end_object();
  }
  w.end_array();
  w.key("C_W_estimate");
  w.value(rep.C_W_estimate);
  w.key("C_w_estimate");
  w.value(rep.C_w_estimate);
  w.key("m0");
  w.value(rep.m0);
  w.key("sigma_min_positive");
  if (rep.sigma_min_positive)
    w.value(*rep.sigma_min_positive);
  else
    w.null_value();
  w.key("W3_holds");
  if (rep.W3_holds)
    w.value(*rep.W3_holds);
  else
    w.null_value();
  w.key("beta2_estimate");
  if (rep.beta2_estimate)
    w.value(*rep.beta2_estimate);
  else
    w.null_value();
  w.key("ell");
  w.value(split.ell);
  w.key("warnings");
  w.begin_array();
  for (const auto& s : split.warnings) w.value(s);
  w.end_array();
  w.end_object();
  write_file((out / "conditions.json").string(), w.str());
}

void run_spectrum(const RunConfig& cfg, const fs::path& out) {
  const ProblemSpec spec = make_problem(cfg);
  const Grid grid = build_grid(cfg.grid_T, cfg.grid_n, spec.dim);
  const SpectralDecomposition dec = eigendecompose(assemble_operator(spec, grid));

  double m0 = 0.0;
  bool have_m0 = false;
  if (spec.potential.asymptotic_part) {
    const ConditionReport rep = check_conditions(spec, cfg.solver.plan);
    m0 = rep.m0;
    have_m0 = m0 > 0;
  }

  CsvWriter csv({"index", "lambda"});
  for (int i = 0; i < dec.lambda.size(); ++i)
    csv.raw_row({std::to_string(i + 1), format_double(dec.lambda(i))});
  write_file((out / "eigenvalues.csv").string(), csv.str());

  int ell = 0;
  if (have_m0) ell = classify(dec, dec.zero_tol, m0).ell;

  JsonWriter w;
  w.begin_object();
  w.key("n_minus");
  w.value(dec.n_minus);
  w.key("n_zero");
  w.value(dec.n_zero);
  w.key("ell");
  w.value(ell);
  w.key("m0");
  if (have_m0)
    w.value(m0);
  else
    w.null_value();
  w.key("zero_tol");
  w.value(dec.zero_tol);
  w.end_object();
  write_file((out / "summary.json").string(), w.str());
}

SolveReport run_solve(const RunConfig& cfg, const fs::path& out) {
  const ProblemSpec spec = make_problem(cfg);
  const Grid grid = build_grid(cfg.grid_T, cfg.grid_n, spec.dim);
  const SolveReport rep = mountain_pass_solve(spec, grid, cfg.solver);

  JsonWriter w;
  solve_report_json(w, rep);
  write_file((out / "solve_report.json").string(), w.str());
  write_file((out / "solution.csv").string(), solution_csv(rep.solution));
  write_file((out / "phi_history.csv").string(), history_csv(rep.history));
  return rep;
}

void run_multi_solve(const RunConfig& cfg, const fs::path& out) {
  const ProblemSpec spec = make_problem(cfg);
  const Grid grid = build_grid(cfg.grid_T, cfg.grid_n, spec.dim);
  const MultiSolveResult res = multi_solve(spec, grid, cfg.solver);

  JsonWriter w;
  w.begin_object();
  w.key("ell");
  w.value(res.ell);
  w.key("starts");
  w.value(res.starts);
  w.key("converged");
  w.value(res.converged);
  w.key("distinct_pairs");
  w.value(static_cast<int>(res.solutions.size()));
  w.key("solutions");
  w.begin_array();
  for (std::size_t k = 0; k < res.solutions.size(); ++k) {
    const SolveReport& rep = res.solutions[k];
    const std::string file = "solution_" + std::to_string(k + 1) + ".csv";
    write_file((out / file).string(), solution_csv(rep.solution));
    w.begin_object();
    w.key("status");
    w.value(to_string(rep.status));
    w.key("critical_value");
    w.value(rep.critical_value);
    w.key("grad_norm");
    w.value(rep.grad_norm);
    w.key("iterations");
    w.value(rep.iterations);
    w.key("solution_file");
    w.value(file);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  write_file((out / "multi_summary.json").string(), w.str());
}

void run_verify(const RunConfig& cfg, const fs::path& out) {
  const ProblemSpec spec = make_problem(cfg);
  const SolveReport rep = run_solve(cfg, out);
  const VerificationReport v = refine_and_compare(rep, spec, cfg.solver, cfg.verify);

  JsonWriter w;
  w.begin_object();
  w.key("residual_l2");
  w.value(v.residual_l2);
  w.key("residual_inf");
  w.value(v.residual_inf);
  w.key("decay_tail_u");
  w.value(v.decay_tail_u);
  w.key("decay_tail_du");
  w.value(v.decay_tail_du);
  w.key("refinement_drift");
  w.value(v.refinement_drift);
  w.key("domain_drift");
  w.value(v.domain_drift);
  w.key("passed");
  w.value(v.passed);
  w.key("notes");
  w.begin_array();
  for (const auto& s : v.notes) w.value(s);
  w.end_array();
  w.end_object();
  write_file((out / "verification.json").string(), w.str());
}

}  // namespace

int run(Command cmd, const RunConfig& cfg) {
  try {
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    switch (cmd) {
      case Command::check: run_check(cfg, out); break;
      case Command::spectrum: run_spectrum(cfg, out); break;
      case Command::solve: run_solve(cfg, out); break;
      case Command::multi_solve: run_multi_solve(cfg, out); break;
      case Command::verify: run_verify(cfg, out); break;
    }
    return 0;
  } catch (const ConfigError& e) {
    JsonWriter w;
    w.begin_object();
    w.key("error");
    w.begin_object();
    w.key("origin");
    w.value("config");
    w.key("message");
    w.value(e.what());
    w.end_object();
    w.end_object();
    std::fputs(w.str().c_str(), stderr);
    return 2;
  } catch (const std::exception& e) {
    JsonWriter w;
    w.begin_object();
    w.key("error");
    w.begin_object();
    w.key("origin");
    w.value("runtime");
    w.key("message");
    w.value(e.what());
    w.end_object();
    w.end_object();
    std::fputs(w.str().c_str(), stderr);
    return 1;
  }
}

}  // namespace homoclinic
