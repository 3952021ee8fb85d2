#include "sublab/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

namespace sublab {

namespace {

Vec random_gaussian(std::int64_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (std::int64_t i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

double orthogonalize(const Mat& V, int m, Vec& r) {
  for (int pass = 0; pass < 2; ++pass) {
    if (m > 0) {
      Vec coef = V.leftCols(m).transpose() * r;
      r.noalias() -= V.leftCols(m) * coef;
    }
  }
  return r.norm();
}

double inf_norm(const SparseMat& a) {
  double worst = 0.0;
  for (int r = 0; r < a.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMat::InnerIterator it(a, r); it; ++it) s += std::abs(it.value());
    worst = std::max(worst, s);
  }
  return worst;
}

std::vector<std::vector<int>> cluster_indices(const std::vector<double>& lam,
                                              double tol) {
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < lam.size();) {
    std::vector<int> group{static_cast<int>(i)};
    std::size_t j = i + 1;
    while (j < lam.size() && std::abs(lam[j] - lam[j - 1]) <= tol) {
      group.push_back(static_cast<int>(j));
      ++j;
    }
    out.push_back(std::move(group));
    i = j;
  }
  return out;
}

void attach_provenance(Spectrum& s, const AssembledOperator& A) {
  s.meta.model_desc = A.model ? A.model->describe() : "custom";
  s.meta.grid_desc = A.grid ? A.grid->describe() : "custom";
  s.meta.potential_desc = A.zero_potential ? "zero" : "given";
  s.meta.potential_min = A.potential_min;
}

// Thick-restart Rayleigh-Ritz iteration over an abstract applied operator.
// In direct mode the applied operator is A itself and the wanted Ritz pairs
// sit at the low end; in shift-invert mode it is (A - sigma)^{-1} and the
// wanted pairs sit at the high end with lambda = sigma + 1/mu.
struct KrylovDriver {
  const AssembledOperator& A;
  const SolverOptions& opt;
  bool invert = false;
  double sigma = 0.0;
  std::function<Vec(const Vec&)> apply = {};
  int applies = 0;
  int a_matvecs = 0;

  Spectrum run() {
    const std::int64_t n = A.size();
    const int k = opt.k;
    // Block expansion: a single Krylov chain cannot separate copies of a
    // degenerate eigenvalue, so the chain is carried by `b` vectors at once.
    const int b = static_cast<int>(
        std::min<std::int64_t>(n, std::max(1, opt.block_size)));
    int m_max = opt.max_subspace > 0
                    ? opt.max_subspace
                    : static_cast<int>(std::min<std::int64_t>(
                          n, std::max(4 * k + 40, invert ? 60 : 120)));
    m_max = std::max(m_max, std::min<int>(static_cast<int>(n), k + b + 1));
    const int keep = std::min(m_max - b, std::max(2 * k + 10, k + 5));

    Mat V(n, m_max), W(n, m_max);
    Mat H = Mat::Zero(m_max, m_max);
    std::mt19937_64 rng(opt.seed);

    int m = 0;
    int since_check = 0;
    Eigen::SelfAdjointEigenSolver<Mat> es;

    auto expand = [&](Vec&& candidate) -> bool {
      double beta = orthogonalize(V, m, candidate);
      if (!(beta > 1e-13)) {
        candidate = random_gaussian(n, rng);
        beta = orthogonalize(V, m, candidate);
        if (!(beta > 1e-13)) return false;  // basis spans the space
      }
      V.col(m) = candidate / beta;
      W.col(m) = apply(V.col(m));
      ++applies;
      for (int i = 0; i <= m; ++i) {
        H(i, m) = V.col(i).dot(W.col(m));
        H(m, i) = H(i, m);
      }
      ++m;
      return true;
    };

    std::vector<int> chain;  // columns of the newest block
    for (int i = 0; i < b && m < static_cast<int>(n); ++i) {
      if (expand(random_gaussian(n, rng))) chain.push_back(m - 1);
    }
    if (chain.empty())
      throw SolverFailure("degenerate starting basis", Spectrum{});

    Spectrum best;
    for (int iter = 0; iter < opt.max_iter; ++iter) {
      const bool spanned = (m >= n);
      // restart before the block no longer fits, so the chain never narrows;
      // when the basis can span the whole space, fill it instead
      const bool full =
          (m + static_cast<int>(chain.size()) > m_max) && (m_max < n);
      ++since_check;
      if (since_check >= 8 || full || spanned) {
        since_check = 0;
        es.compute(H.topLeftCorner(m, m));
        // wanted order: ascending theta in direct mode, descending in invert
        std::vector<int> order(m);
        for (int i = 0; i < m; ++i) order[i] = invert ? m - 1 - i : i;

        if (m > k || spanned) {
          const int kk = std::min<int>(k, m);
          Mat X(n, kk);
          std::vector<double> lam(kk), res(kk);
          for (int i = 0; i < kk; ++i) {
            const int oi = order[i];
            X.col(i) = V.leftCols(m) * es.eigenvectors().col(oi);
            const double mu = es.eigenvalues()(oi);
            lam[i] = invert ? sigma + 1.0 / mu : mu;
          }
          bool ok = (kk == k);
          for (int i = 0; i < kk && ok; ++i) {
            Vec ax;
            if (invert) {
              ax = A.matrix * X.col(i);
              ++a_matvecs;
            } else {
              ax = W.leftCols(m) * es.eigenvectors().col(order[i]);
            }
            res[i] = (ax - lam[i] * X.col(i)).norm() / X.col(i).norm();
            if (!(res[i] <= opt.tol)) ok = false;
          }
          if (std::getenv("SUBLAB_SOLVER_TRACE")) {
            fprintf(stderr, "trace iter=%d m=%d chain=%zu lam0=%.6g res0=%.3g ok=%d\n",
                    iter, m, chain.size(), lam.empty() ? 0.0 : lam[0],
                    res.empty() ? -1.0 : res[0], int(ok));
          }
          if (ok || (spanned && kk == k)) {
            if (!ok && spanned) {
              // exact subspace; residuals are as good as they get
              for (int i = 0; i < kk; ++i) {
                Vec ax = A.matrix * X.col(i);
                ++a_matvecs;
                res[i] = (ax - lam[i] * X.col(i)).norm() / X.col(i).norm();
              }
            }
            Spectrum s;
            s.eigenvalues = lam;
            s.residuals = res;
            s.cell_volume = A.cell_volume;
            if (opt.want_vectors)
              s.vectors = X / std::sqrt(A.cell_volume);
            s.meta.solver = invert ? "lanczos_tr_shift_invert" : "lanczos_tr";
            s.meta.iterations = iter + 1;
            s.meta.matvecs = applies + a_matvecs;
            s.meta.tol = opt.tol;
            s.meta.seed = opt.seed;
            s.meta.converged = true;
            attach_provenance(s, A);
            const double scale = inf_norm(A.matrix);
            s.meta.cluster_tol = 1e-9 * std::max(scale, 1e-300);
            s.meta.clusters = cluster_indices(s.eigenvalues, s.meta.cluster_tol);
            const bool all_ok = std::all_of(
                res.begin(), res.end(),
                [&](double r) { return r <= opt.tol; });
            if (all_ok) return s;
            if (spanned) {
              s.meta.converged = false;
              throw SolverFailure(
                  "residual tolerance unreachable on the full space", s);
            }
            best = std::move(s);
          }
        }

        if (spanned) continue;
        if (full) {
          // Thick restart: the block chain continues through the
          // orthogonalized remainders of the applied block, captured before
          // compression so the recurrence is not broken.
          std::vector<Vec> cont;
          for (const int c : chain) {
            Vec w = W.col(c);
            orthogonalize(V, m, w);
            cont.push_back(std::move(w));
          }
          const int r =
              std::max(1, std::min(keep, m - static_cast<int>(chain.size())));
          Mat Y(m, r);
          Vec theta(r);
          for (int i = 0; i < r; ++i) {
            Y.col(i) = es.eigenvectors().col(order[i]);
            theta(i) = es.eigenvalues()(order[i]);
          }
          Mat Vr = V.leftCols(m) * Y;
          Mat Wr = W.leftCols(m) * Y;
          V.leftCols(r) = Vr;
          W.leftCols(r) = Wr;
          H.setZero();
          for (int i = 0; i < r; ++i) H(i, i) = theta(i);
          m = r;
          chain.clear();
          for (auto& w : cont) {
            if (m < m_max && expand(std::move(w))) chain.push_back(m - 1);
          }
          if (chain.empty()) break;
          continue;
        }
      }
      std::vector<int> prev = chain;
      chain.clear();
      for (const int c : prev) {
        if (m >= m_max || m >= static_cast<int>(n)) break;
        Vec next = W.col(c);
        if (expand(std::move(next))) chain.push_back(m - 1);
      }
      if (chain.empty()) break;
    }

    if (best.count() > 0) {
      best.meta.converged = false;
      throw SolverFailure("eigensolver did not converge within max_iter", best);
    }
    Spectrum partial;
    partial.cell_volume = A.cell_volume;
    partial.meta.solver = invert ? "lanczos_tr_shift_invert" : "lanczos_tr";
    partial.meta.converged = false;
    partial.meta.tol = opt.tol;
    partial.meta.seed = opt.seed;
    attach_provenance(partial, A);
    throw SolverFailure("eigensolver did not converge within max_iter", partial);
  }
};

}  // namespace

Spectrum smallest_eigenpairs(const AssembledOperator& A, const SolverOptions& opt) {
  const std::int64_t n = A.size();
  if (opt.k < 1 || opt.k > n - 1)
    throw std::invalid_argument("k must satisfy 1 <= k <= N-1");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("tol must be positive");

  if (opt.method == "dense") {
    Spectrum full = dense_spectrum(A, std::max<int>(opt.dense_cap, n), true);
    full.eigenvalues.resize(opt.k);
    full.residuals.resize(opt.k);
    if (opt.want_vectors)
      full.vectors = full.vectors.leftCols(opt.k).eval();
    else
      full.vectors = Mat();
    full.meta.clusters = cluster_indices(full.eigenvalues, full.meta.cluster_tol);
    return full;
  }

  bool invert = false;
  if (opt.method == "shift_invert") {
    invert = true;
  } else if (opt.method == "matvec") {
    invert = false;
  } else if (opt.method == "auto") {
    const int dim = A.grid ? A.grid->dim() : 3;
    invert = (n <= 400000 && dim <= 3 && n > 64);
  } else {
    throw std::invalid_argument("unknown solver method: " + opt.method);
  }

  KrylovDriver drv{A, opt};
  if (invert) {
    const double sigma = std::min(0.0, A.potential_min) - 1.0;
    Eigen::SparseMatrix<double> shifted = A.matrix;
    for (std::int64_t i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
    auto ldlt = std::make_shared<
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    ldlt->compute(shifted);
    if (ldlt->info() == Eigen::Success) {
      drv.invert = true;
      drv.sigma = sigma;
      drv.apply = [ldlt](const Vec& v) -> Vec { return ldlt->solve(v); };
      return drv.run();
    }
    // factorization failed; fall through to the matvec iteration
  }
  drv.invert = false;
  drv.apply = [&A](const Vec& v) -> Vec { return A.matrix * v; };
  return drv.run();
}

Spectrum dense_spectrum(const AssembledOperator& A, int cap, bool want_vectors) {
  const std::int64_t n = A.size();
  if (n > cap) throw std::invalid_argument("dense oracle cap exceeded");
  Mat dense(A.matrix);
  Eigen::SelfAdjointEigenSolver<Mat> es(dense);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense eigendecomposition failed");

  Spectrum s;
  s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  s.residuals.resize(n);
  Mat R = A.matrix * es.eigenvectors() -
          es.eigenvectors() * es.eigenvalues().asDiagonal();
  for (std::int64_t i = 0; i < n; ++i) s.residuals[i] = R.col(i).norm();
  s.cell_volume = A.cell_volume;
  if (want_vectors) s.vectors = es.eigenvectors() / std::sqrt(A.cell_volume);
  s.meta.solver = "dense_eigen";
  s.meta.converged = true;
  s.meta.tol = 0.0;
  const double scale = inf_norm(A.matrix);
  s.meta.cluster_tol = 1e-9 * std::max(scale, 1e-300);
  s.meta.clusters = cluster_indices(s.eigenvalues, s.meta.cluster_tol);
  attach_provenance(s, A);
  return s;
}

double residual(const SparseMat& A, double lambda, const Vec& u) {
  const double nu = u.norm();
  if (!(nu > 0.0)) throw std::invalid_argument("residual of a zero vector");
  return (A * u - lambda * u).norm() / nu;
}

double residual(const AssembledOperator& A, double lambda, const Vec& u) {
  return residual(A.matrix, lambda, u);
}

}  // namespace sublab
