#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

constexpr const char* kFooter = R"(Tasks (config "task"): solve_discrete, solve_continuous, censorship, oracle, sweep.

CSV columns written by the sweep task:
  uc_z        z,m,W,delta             walk point z, pooled mean m(z), value W(z), tangent gap
  cutoff      omega,value,residual,m_L,m_R
                                      cutoff, cutoff-rule value, tangent-line gap, pool means
  censorship  bitmask,value           censored outlets (bit k = outlet k), government value

Exit status: 0 success, 2 invalid config, 3 solver error.
Environment: MP_SOLVER_THREADS caps worker threads; MP_SOLVER_SIMD=scalar disables SIMD kernels.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal monotone persuasion solver"};
  app.footer(kFooter);
  std::string config;
  std::string out_dir = ".";
  mpersuade::cli::Overrides overrides;
  std::uint64_t seed = 0;
  int grid = 0;
  double tol = 0.0;
  app.add_option("--config", config, "Problem config (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Seed for random instance batches");
  auto* grid_opt = app.add_option("--grid", grid, "Scan / sweep / oracle grid size");
  auto* tol_opt = app.add_option("--tol", tol, "Root bracket width");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mpersuade::cli::kExitInvalid;
  }
  if (*seed_opt) overrides.seed = seed;
  if (*grid_opt) overrides.grid = grid;
  if (*tol_opt) overrides.tol = tol;
  return mpersuade::cli::run(config, out_dir, overrides, std::cerr);
}
