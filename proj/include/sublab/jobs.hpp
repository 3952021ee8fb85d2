#pragma once

#include "sublab/io.hpp"

#include <cstdint>
#include <vector>

namespace sublab {

// Exit-code contract shared by the CLI verbs:
// 0 = success / all checks pass, 2 = check failure, 3 = solver failure,
// 4 = config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 2;
inline constexpr int kExitSolverFailure = 3;
inline constexpr int kExitConfigError = 4;

/// Builds model/grid/potential from the job file, solves, writes the spectrum
/// JSON (payload deterministic for a fixed seed) and the optional eigenvector
/// block.
int run_solve(const json& job, bool verbose = false);

/// Loads a spectrum file and evaluates the job's check list; writes JSON and
/// CSV reports. Nonzero iff a non-degenerate check fails beyond tolerance.
int run_check(const json& job, bool verbose = false);

/// Tension/semi-isometry/Reilly quantities for a map preset; optionally the
/// per-eigenpair coefficients when a spectrum with vectors is supplied.
int run_tension(const json& job, bool verbose = false);

/// Refinement sweep: solves the job on successively halved spacings and emits
/// a CSV of eigenvalues and check margins plus observed convergence orders.
int run_sweep(const json& job, bool verbose = false);

/// Randomized commutator-inequality batch on dense symmetric pairs.
int run_lemma_lab(int dim, int trials, const std::vector<double>& p_values,
                  std::uint64_t seed, const std::string& out_path,
                  bool verbose = false);

// Shared parsing helpers (exposed for tests).
GroupModel parse_model(const json& job);
GridDomain parse_grid(const json& job);
Vec parse_potential(const json& job, const GridDomain& grid, json* descriptor_out = nullptr);
SolverOptions parse_solver_options(const json& job, std::int64_t n_unknowns);

}  // namespace sublab
