#include "sublab/inequalities.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sublab {

std::string family_name(Family f) {
  switch (f) {
    case Family::YangType: return "yang";
    case Family::AverageBound: return "average";
    case Family::PowerBound: return "power";
    case Family::Reilly: return "reilly";
    case Family::CommutatorLemma: return "commutator_lemma";
  }
  return "?";
}

double OffsetSpec::at(int i) const {
  switch (mode) {
    case Mode::Zero: return 0.0;
    case Mode::Constant: return constant;
    case Mode::PerIndex: return per_index.at(i);
  }
  return 0.0;
}

OffsetSpec OffsetSpec::zero() { return OffsetSpec{}; }

OffsetSpec OffsetSpec::constant_value(double c, std::string note) {
  OffsetSpec s;
  s.mode = Mode::Constant;
  s.constant = c;
  s.provenance = std::move(note);
  return s;
}

OffsetSpec OffsetSpec::per_index_values(std::vector<double> v, std::string note) {
  OffsetSpec s;
  s.mode = Mode::PerIndex;
  s.per_index = std::move(v);
  s.provenance = std::move(note);
  return s;
}

bool InequalityReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.pass; });
}

namespace {

void require_sorted(std::span<const double> lambda, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (static_cast<std::size_t>(k) + 1 > lambda.size())
    throw std::invalid_argument("need at least k+1 eigenvalues");
  for (std::size_t i = 1; i < lambda.size(); ++i)
    if (lambda[i] < lambda[i - 1])
      throw std::invalid_argument("eigenvalues must be nondecreasing");
}

struct GapPow {
  double value = 0.0;
  bool degenerate = false;
};

// gap >= 0. 0^0 is taken as 1; 0^negative terms are dropped and flagged
// (the 0 * inf convention for degenerate gaps).
GapPow gap_pow(double gap, double expo) {
  if (gap > 0.0) return {std::pow(gap, expo), false};
  if (expo > 0.0) return {0.0, false};
  if (expo == 0.0) return {1.0, false};
  return {0.0, true};
}

CheckRow finish_row(int k, double p, bool has_p, double lhs, double rhs,
                    bool degenerate, double tol_rel) {
  CheckRow row;
  row.k = k;
  row.p = p;
  row.has_p = has_p;
  row.lhs = lhs;
  row.rhs = rhs;
  row.margin = rhs - lhs;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  row.rel_margin = scale > 0.0 ? row.margin / scale : 0.0;
  row.pass = row.margin >= -tol_rel * scale;
  row.degenerate = degenerate;
  return row;
}

double mean_first_k(std::span<const double> lambda, int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += lambda[i];
  return s / k;
}

double average_rhs(DimMode mode, int dim, double mk, double extra) {
  if (mode == DimMode::CR) return (1.0 + 2.0 / dim) * mk + extra / (2.0 * dim);
  return (1.0 + 4.0 / dim) * mk - (4.0 / dim) * extra;
}

}  // namespace

double yang_constant(DimMode mode, int dim_param, double p) {
  if (dim_param < 1) throw std::invalid_argument("dimension parameter must be >= 1");
  return mode == DimMode::CR ? std::max(2.0, p) / dim_param
                             : std::max(4.0, 2.0 * p) / dim_param;
}

InequalityReport yang_type_check(std::span<const double> lambda, int k, double p,
                                 double C, const OffsetSpec& offsets,
                                 double tol_rel) {
  require_sorted(lambda, k);
  if (!(C > 0.0)) throw std::invalid_argument("constant C must be positive");
  if (offsets.mode == OffsetSpec::Mode::PerIndex &&
      static_cast<int>(offsets.per_index.size()) < k)
    throw std::invalid_argument("per-index offsets shorter than k");

  double lhs = 0.0, rhs = 0.0;
  bool degenerate = false;
  for (int i = 0; i < k; ++i) {
    const double gap = lambda[k] - lambda[i];
    if (gap < 0.0) throw std::invalid_argument("negative spectral gap");
    const GapPow gl = gap_pow(gap, p);
    const GapPow gr = gap_pow(gap, p - 1.0);
    degenerate = degenerate || gl.degenerate || gr.degenerate;
    lhs += gl.value;
    rhs += gr.value * (lambda[i] + offsets.at(i));
  }
  rhs *= C;

  InequalityReport rep;
  rep.family = Family::YangType;
  rep.tol_rel = tol_rel;
  rep.offsets_note = offsets.provenance;
  rep.nonpositive_p_warning = (p <= 0.0);
  rep.rows.push_back(finish_row(k, p, true, lhs, rhs, degenerate, tol_rel));
  return rep;
}

InequalityReport average_bound_check(std::span<const double> lambda, int k,
                                     DimMode mode, int dim_param, double extra,
                                     double tol_rel) {
  require_sorted(lambda, k);
  if (!std::isfinite(extra))
    throw std::invalid_argument("extra term must be finite");
  const double rhs = average_rhs(mode, dim_param, mean_first_k(lambda, k), extra);
  InequalityReport rep;
  rep.family = Family::AverageBound;
  rep.dim_mode = mode;
  rep.dim_param = dim_param;
  rep.tol_rel = tol_rel;
  rep.rows.push_back(finish_row(k, 0.0, false, lambda[k], rhs, false, tol_rel));
  return rep;
}

InequalityReport power_bound_check(std::span<const double> lambda, int k,
                                   DimMode mode, int dim_param, double extra,
                                   double tol_rel) {
  require_sorted(lambda, k);
  if (!std::isfinite(extra))
    throw std::invalid_argument("extra term must be finite");
  double rhs;
  if (mode == DimMode::CR) {
    const double coef =
        (1.0 + 2.0 / dim_param) * std::pow(k, 1.0 / dim_param);
    rhs = coef * lambda[0] + 0.25 * ((coef - 1.0) * extra);
  } else {
    const double coef =
        (1.0 + 4.0 / dim_param) * std::pow(k, 2.0 / dim_param);
    rhs = coef * lambda[0] - (coef - 1.0) * extra;
  }
  InequalityReport rep;
  rep.family = Family::PowerBound;
  rep.dim_mode = mode;
  rep.dim_param = dim_param;
  rep.tol_rel = tol_rel;
  rep.rows.push_back(finish_row(k, 0.0, false, lambda[k], rhs, false, tol_rel));
  return rep;
}

double implied_next_bound(std::span<const double> lambda_first_k, int n,
                          double d_inf) {
  if (lambda_first_k.empty())
    throw std::invalid_argument("need at least one eigenvalue");
  const int k = static_cast<int>(lambda_first_k.size());
  return average_rhs(DimMode::CR, n, mean_first_k(lambda_first_k, k), d_inf);
}

InequalityReport reilly_check(double lambda2, int n, const ReillyQuantities& q,
                              ReillyMode mode, double tol_rel) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  double lhs, rhs;
  if (mode == ReillyMode::EnergyForm) {
    if (q.energy == 0.0) throw std::invalid_argument("zero energy");
    lhs = lambda2 * q.energy;
    rhs = 0.5 * q.tension_integral;
  } else {
    if (q.volume == 0.0) throw std::invalid_argument("zero volume");
    lhs = lambda2;
    rhs = q.tension_integral / (2.0 * n * q.volume);
  }
  InequalityReport rep;
  rep.family = Family::Reilly;
  rep.dim_param = n;
  rep.tol_rel = tol_rel;
  rep.rows.push_back(finish_row(1, 0.0, false, lhs, rhs, false, tol_rel));
  return rep;
}

InequalityReport commutator_lemma_check(const Mat& A, const Mat& B, int k,
                                        double p, double tol) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw std::invalid_argument("operands must be square and of equal size");
  const double scale_a = std::max(1.0, A.cwiseAbs().maxCoeff());
  const double scale_b = std::max(1.0, B.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_a)
    throw std::invalid_argument("A must be symmetric");
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_b)
    throw std::invalid_argument("B must be symmetric");
  const int dim = static_cast<int>(A.rows());
  if (k < 1 || k + 1 > dim)
    throw std::invalid_argument("need k+1 eigenvalues of A");

  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  const Vec lam = es.eigenvalues();
  const Mat C = A * B - B * A;
  const Mat CU = C * es.eigenvectors().leftCols(k);
  const Mat BU = B * es.eigenvectors().leftCols(k);

  double lhs = 0.0, rhs = 0.0;
  bool degenerate = false;
  for (int i = 0; i < k; ++i) {
    const double gap = lam[k] - lam[i];
    const GapPow gl = gap_pow(gap, p);
    const GapPow gr = gap_pow(gap, p - 1.0);
    degenerate = degenerate || gl.degenerate || gr.degenerate;
    lhs += gl.value * CU.col(i).dot(BU.col(i));
    rhs += gr.value * CU.col(i).squaredNorm();
  }
  rhs *= std::max(1.0, p / 2.0);

  InequalityReport rep;
  rep.family = Family::CommutatorLemma;
  rep.tol_rel = tol;
  rep.nonpositive_p_warning = (p <= 0.0);
  rep.rows.push_back(finish_row(k, p, true, lhs, rhs, degenerate, tol));
  return rep;
}

OffsetSpec offsets_heisenberg_zero() {
  return OffsetSpec::constant_value(0.0, "heisenberg_zero");
}

OffsetSpec offsets_sphere(int n) {
  if (n < 1) throw std::invalid_argument("sphere offsets require n >= 1");
  return OffsetSpec::constant_value(static_cast<double>(n) * n, "sphere_n2");
}

OffsetSpec offsets_projective(int n, int d_f) {
  if (n < 1) throw std::invalid_argument("projective offsets require n >= 1");
  if (d_f != 1 && d_f != 2 && d_f != 4)
    throw std::invalid_argument("d_f must be 1, 2, or 4");
  if ((2 * n) % d_f != 0)
    throw std::invalid_argument("d_f must divide 2n");
  return OffsetSpec::constant_value(static_cast<double>(n) * (2 * n + d_f),
                                    "projective");
}

OffsetSpec offsets_submersion(double h_euc) {
  return OffsetSpec::constant_value(0.25 * h_euc * h_euc, "submersion");
}

OffsetSpec offsets_tension(std::span<const double> d_i) {
  std::vector<double> s(d_i.size());
  for (std::size_t i = 0; i < d_i.size(); ++i) s[i] = 0.25 * d_i[i];
  return OffsetSpec::per_index_values(std::move(s), "tension_d");
}

}  // namespace sublab
