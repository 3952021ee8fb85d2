#pragma once

#include "sublab/assemble.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sublab {

struct SpectrumMeta {
  std::string solver;
  int iterations = 0;
  int matvecs = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  bool converged = true;
  double cluster_tol = 0.0;
  double potential_min = 0.0;
  std::vector<std::vector<int>> clusters;  // indices of degenerate groups
  std::string model_desc, grid_desc, potential_desc;
};

/// Ordered eigenpairs of an assembled operator. Eigenvectors are normalized
/// in the discrete measure: cell_volume * sum u_i^2 = 1.
struct Spectrum {
  std::vector<double> eigenvalues;  // nondecreasing
  std::vector<double> residuals;    // |A u - lambda u| / |u| per pair
  Mat vectors;                      // N x k, empty when not requested
  double cell_volume = 1.0;
  SpectrumMeta meta;

  int count() const { return static_cast<int>(eigenvalues.size()); }
};

struct SolverOptions {
  int k = 6;
  double tol = 1e-8;  // absolute residual threshold, operator units
  int max_iter = 20000;
  std::uint64_t seed = 0x5eb1ab5eedULL;
  int max_subspace = 0;  // 0 = automatic
  int block_size = 3;    // chain width; bounds the resolvable multiplicity
  bool want_vectors = true;
  // "auto" picks shift-invert for moderate low-dimensional problems and the
  // matvec-only thick-restart iteration otherwise.
  std::string method = "auto";  // auto | shift_invert | matvec | dense
  int dense_cap = 3000;
};

/// Thrown when the iteration budget is exhausted; carries partial results.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, Spectrum partial_)
      : std::runtime_error(what), partial(std::move(partial_)) {}
  Spectrum partial;
};

/// k smallest eigenpairs with certified residuals; deterministic for a fixed
/// seed. Throws std::invalid_argument unless 1 <= k <= N-1, SolverFailure on
/// non-convergence.
Spectrum smallest_eigenpairs(const AssembledOperator& A, const SolverOptions& opt);

/// Dense oracle: all N eigenvalues via symmetric tridiagonalization + QR.
Spectrum dense_spectrum(const AssembledOperator& A, int cap = 3000,
                        bool want_vectors = true);

/// |A u - lambda u| / |u|.
double residual(const AssembledOperator& A, double lambda, const Vec& u);
double residual(const SparseMat& A, double lambda, const Vec& u);

}  // namespace sublab
