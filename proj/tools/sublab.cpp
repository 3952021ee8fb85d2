// Batch front-end for the sub-Laplacian spectral laboratory: job files in,
// spectrum/report/CSV files out. One job per invocation.
//
// Exit codes: 0 success / all checks pass, 2 check failure, 3 solver failure,
// 4 config error.

#include "sublab/jobs.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

sublab::json load_job(const std::string& path) {
  return sublab::load_json_file(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-Laplacian spectral laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "progress output on stderr");

  std::string job_path;
  std::string spectrum_override, report_override, csv_override, out_override;
  std::uint64_t seed_override = 0;
  bool have_seed = false;

  auto* solve = app.add_subcommand("solve", "solve a spectrum job");
  solve->add_option("job", job_path, "job config JSON")->required();
  solve->add_option("--seed", seed_override, "override the solver seed")
      ->each([&](const std::string&) { have_seed = true; });
  solve->add_option("--out", out_override, "override the spectrum output path");

  auto* check = app.add_subcommand("check", "evaluate inequality checks");
  check->add_option("job", job_path, "job config JSON")->required();
  check->add_option("--spectrum", spectrum_override, "override the spectrum path");
  check->add_option("--report", report_override, "override the report path");
  check->add_option("--csv", csv_override, "override the CSV path");

  auto* tension = app.add_subcommand("tension", "tension / semi-isometry job");
  tension->add_option("job", job_path, "job config JSON")->required();
  tension->add_option("--out", out_override, "override the report path");

  auto* sweep = app.add_subcommand("sweep", "refinement sweep");
  sweep->add_option("job", job_path, "job config JSON")->required();
  sweep->add_option("--out", out_override, "override the CSV path");

  auto* lemma = app.add_subcommand("lemma-lab", "randomized commutator batch");
  int dim = 20, trials = 500;
  std::vector<double> ps{0.5, 1.0, 2.0, 3.0};
  std::uint64_t lemma_seed = 20240624;
  std::string lemma_out = "lemma_lab.json";
  lemma->add_option("--dim", dim, "max matrix dimension");
  lemma->add_option("--trials", trials, "number of random pairs");
  lemma->add_option("--p", ps, "gap exponents");
  lemma->add_option("--seed", lemma_seed, "rng seed");
  lemma->add_option("--out", lemma_out, "report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(lemma))
      return sublab::run_lemma_lab(dim, trials, ps, lemma_seed, lemma_out, verbose);

    sublab::json job = load_job(job_path);
    if (app.got_subcommand(solve)) {
      if (have_seed) job["solver"]["seed"] = seed_override;
      if (!out_override.empty()) job["output"]["spectrum"] = out_override;
      return sublab::run_solve(job, verbose);
    }
    if (app.got_subcommand(check)) {
      if (!spectrum_override.empty()) job["spectrum"] = spectrum_override;
      if (!report_override.empty()) job["output"]["report"] = report_override;
      if (!csv_override.empty()) job["output"]["csv"] = csv_override;
      return sublab::run_check(job, verbose);
    }
    if (app.got_subcommand(tension)) {
      if (!out_override.empty()) job["output"]["report"] = out_override;
      return sublab::run_tension(job, verbose);
    }
    if (app.got_subcommand(sweep)) {
      if (!out_override.empty()) job["output"]["csv"] = out_override;
      return sublab::run_sweep(job, verbose);
    }
  } catch (const sublab::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return sublab::kExitConfigError;
  } catch (const sublab::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return sublab::kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sublab::kExitConfigError;
  }
  return 0;
}
