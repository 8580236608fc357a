// Batch front door: check | spectrum | solve | multi-solve | verify, driven by
// a JSON config with CLI overrides for the output directory and seed.

#include <CLI11.hpp>

#include "homoclinic/run.hpp"

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
  homoclinic::apply_thread_cap();

  CLI::App app{"variational solver for homoclinic orbits of u'' = L(t)u - W_u(t,u)"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string config_path;
  std::string out_dir;
  long long seed = -1;

  app.add_option("--config", config_path, "JSON config file (defaults apply when omitted)");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--seed", seed, "random seed (overrides config)");

  for (const char* name : {"check", "spectrum", "solve", "multi-solve", "verify"})
    app.add_subcommand(name)->ignore_case(false);

  CLI11_PARSE(app, argc, argv);

  const std::string sub = app.get_subcommands().front()->get_name();
  const auto cmd = homoclinic::command_from_name(sub);
  if (!cmd) {
    std::fprintf(stderr, "unknown command: %s\n", sub.c_str());
    return 2;
  }

  homoclinic::RunConfig cfg;
  try {
    cfg = homoclinic::load_config_file(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\":{\"origin\":\"config\",\"message\":\"%s\"}}\n", e.what());
    return 2;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed >= 0) cfg.solver.seed = static_cast<std::uint64_t>(seed);

  return homoclinic::run(*cmd, cfg);
}
