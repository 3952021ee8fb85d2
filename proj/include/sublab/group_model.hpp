#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sublab {

/// Affine scalar function of a point: constant + sum of slope * p[coord].
/// Slopes are stored sparsely, so evaluating at two points that differ only
/// in zero-slope coordinates yields bit-identical values.
struct AffineFn {
  double constant = 0.0;
  std::vector<std::pair<int, double>> slopes;  // (coordinate, slope), sorted

  double operator()(std::span<const double> p) const {
    double v = constant;
    for (const auto& [a, g] : slopes) v += g * p[a];
    return v;
  }
  bool is_constant() const { return slopes.empty(); }
  double slope(int coord) const;
};

/// One term c(p) * d/dx_axis of a horizontal field.
struct FieldTerm {
  int axis;
  AffineFn coeff;
};

/// A horizontal field as a sum of affine-coefficient coordinate derivatives.
/// Terms have pairwise distinct axes.
using Field = std::vector<FieldTerm>;

enum class GroupKind { Heisenberg, CarnotStep2, Abelian };

/// Structure constants of a step-2 stratification: c[k](i,j) is the
/// coefficient of the k-th vertical direction in [X_i, X_j].
using StructureConstants = std::vector<Eigen::MatrixXd>;

class GridDomain;

/// Coordinate presentation of a stratified group: horizontal frame fields
/// with affine coefficients plus the bracket table they must satisfy.
/// Immutable after construction; safe to share across threads.
class GroupModel {
 public:
  static GroupModel heisenberg(int n);
  static GroupModel carnot_step2(int d1, int d2, const StructureConstants& c);
  static GroupModel abelian(int d);

  GroupKind kind() const { return kind_; }
  int ambient_dim() const { return ambient_dim_; }
  int horizontal_rank() const { return static_cast<int>(fields_.size()); }
  double levi_weight() const { return levi_weight_; }

  const Field& field(int j) const { return fields_.at(j); }
  const std::vector<Field>& fields() const { return fields_; }

  /// Coefficient of the vertical direction `axis` prescribed for the
  /// commutator [field i, field j]; zero on horizontal axes (step 2).
  double bracket_constant(int i, int j, int axis) const;

  /// Axes of the vertical layer (the Reeb direction t for Heisenberg,
  /// the t_k block for step-2 Carnot groups; empty for abelian models).
  const std::vector<int>& vertical_axes() const { return vertical_axes_; }

  /// CR dimension n for Heisenberg models, -1 otherwise.
  int cr_n() const { return cr_n_; }
  int carnot_d1() const { return d1_; }
  int carnot_d2() const { return d2_; }
  const StructureConstants& structure_constants() const { return c_; }

  /// Max violation of the symbolic skew-adjointness condition: every
  /// coefficient must have zero slope along every axis its field
  /// differentiates through. Zero for all factory-built models.
  double skew_adjointness_defect() const;

  std::string describe() const;

  /// Diagnostic hook: replace one field term (desynchronizes the frame from
  /// the bracket table so detection paths can be exercised).
  void override_field_term_for_diagnostics(int field, int term, AffineFn coeff);

 private:
  GroupModel() = default;

  GroupKind kind_ = GroupKind::Abelian;
  int ambient_dim_ = 0;
  double levi_weight_ = 1.0;
  int cr_n_ = -1;
  int d1_ = 0, d2_ = 0;
  std::vector<Field> fields_;
  std::vector<int> vertical_axes_;
  StructureConstants c_;  // Carnot only; derived tables for the others
};

/// Max over sampled interior grid points, field pairs, and coordinate axes of
/// the discrepancy between the analytic commutator of the coefficient fields
/// and the bracket table. Exact on the affine data, so correct models give 0.
double bracket_residual(const GroupModel& model, const GridDomain& grid);

}  // namespace sublab
