#pragma once

#include "sublab/tension.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace sublab {

enum class Family { YangType, AverageBound, PowerBound, Reilly, CommutatorLemma };
enum class DimMode { CR, Carnot };
enum class ReillyMode { EnergyForm, SemiIsometricForm };

std::string family_name(Family f);

/// Additive offsets s_i entering the right-hand sides (lambda_i + s_i).
struct OffsetSpec {
  enum class Mode { Zero, Constant, PerIndex };
  Mode mode = Mode::Zero;
  double constant = 0.0;
  std::vector<double> per_index;
  std::string provenance;

  double at(int i) const;  // 0-based eigenvalue index
  static OffsetSpec zero();
  static OffsetSpec constant_value(double c, std::string note = {});
  static OffsetSpec per_index_values(std::vector<double> s, std::string note = {});
};

struct CheckRow {
  int k = 0;
  double p = 0.0;     // meaningful for Yang/CommutatorLemma rows only
  bool has_p = false;
  double lhs = 0.0, rhs = 0.0;
  double margin = 0.0;      // rhs - lhs
  double rel_margin = 0.0;  // margin / max(|lhs|, |rhs|)
  bool pass = false;
  bool degenerate = false;  // singular gap terms were dropped
};

struct InequalityReport {
  Family family = Family::YangType;
  DimMode dim_mode = DimMode::CR;
  int dim_param = 0;  // n (CR) or d (Carnot)
  double tol_rel = 0.0;
  std::string offsets_note;
  bool nonpositive_p_warning = false;
  std::vector<CheckRow> rows;

  bool all_pass() const;
};

/// Preset constant for the gap-power inequality: max{2,p}/n in CR mode,
/// max{4,2p}/d in Carnot mode.
double yang_constant(DimMode mode, int dim_param, double p);

/// sum_i (l_{k+1}-l_i)^p <= C * sum_i (l_{k+1}-l_i)^{p-1} (l_i + s_i).
InequalityReport yang_type_check(std::span<const double> lambda, int k, double p,
                                 double C, const OffsetSpec& offsets,
                                 double tol_rel = 1e-8);

/// l_{k+1} <= (1+2/n) mean_k + extra/(2n)   [CR, extra = D_inf]
/// l_{k+1} <= (1+4/d) mean_k - (4/d) extra  [Carnot, extra = inf V]
InequalityReport average_bound_check(std::span<const double> lambda, int k,
                                     DimMode mode, int dim_param, double extra,
                                     double tol_rel = 1e-8);

/// l_{k+1} <= (1+2/n) k^{1/n} l_1 + ((1+2/n)k^{1/n}-1)/4 * extra   [CR]
/// l_{k+1} <= (1+4/d) k^{2/d} l_1 - ((1+4/d)k^{2/d}-1) * extra     [Carnot]
InequalityReport power_bound_check(std::span<const double> lambda, int k,
                                   DimMode mode, int dim_param, double extra,
                                   double tol_rel = 1e-8);

/// Larger root of the quadratic relation: (1+2/n) mean_k + D_inf/(2n).
/// Equal to average_bound_check's rhs by construction.
double implied_next_bound(std::span<const double> lambda_first_k, int n,
                          double d_inf);

InequalityReport reilly_check(double lambda2, int n, const ReillyQuantities& q,
                              ReillyMode mode, double tol_rel = 1e-8);

/// Finite-dimensional commutator inequality on a self-adjoint pair:
/// sum_i g_i^p <[A,B]u_i, B u_i>  <=  max{1,p/2} sum_i g_i^{p-1} |[A,B]u_i|^2
/// with g_i = lambda_{k+1} - lambda_i from the eigendecomposition of A.
InequalityReport commutator_lemma_check(const Mat& A, const Mat& B, int k,
                                        double p, double tol = 1e-10);

// Offset presets.
OffsetSpec offsets_heisenberg_zero();
OffsetSpec offsets_sphere(int n);                        // n^2
OffsetSpec offsets_projective(int n, int d_f);           // n(2n + d_f)
OffsetSpec offsets_submersion(double h_euc);             // h_euc^2 / 4
OffsetSpec offsets_tension(std::span<const double> d_i); // d_i / 4 per index

}  // namespace sublab
