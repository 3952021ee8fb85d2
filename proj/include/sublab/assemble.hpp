#pragma once

#include "sublab/grid.hpp"
#include "sublab/group_model.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <memory>
#include <vector>

namespace sublab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Sparse operator for the Schroedinger form: weight * sum_j of the squared
/// field differences plus diag(V). Exactly symmetric by construction.
struct AssembledOperator {
  SparseMat matrix;
  double cell_volume = 1.0;
  double potential_min = 0.0;
  bool zero_potential = true;
  std::shared_ptr<const GroupModel> model;
  std::shared_ptr<const GridDomain> grid;

  std::int64_t size() const { return matrix.rows(); }

  /// Wrap an explicit matrix (degenerate test doubles, lemma experiments).
  static AssembledOperator from_matrix(SparseMat m, double cell_volume = 1.0);
};

/// Centered-difference discretization of field j, with the affine coefficient
/// evaluated at the row's node. Exactly skew-symmetric on the clamped lattice
/// because no coefficient depends on the coordinate it differentiates.
SparseMat first_order_operator(const GroupModel& model, int field_index,
                               const GridDomain& grid);

/// Forward-difference rows of field j over the closed lattice (rows at
/// boundary nodes carry the Dirichlet edge terms). S_j plus the half-step
/// second-difference completion; the assembly composes these so the abelian
/// model reproduces the classical Dirichlet Laplacian stencil.
/// Returned as (row count, CSR-like row arrays) for the Gram accumulation.
struct FieldRows {
  std::vector<std::int64_t> ptr;
  std::vector<std::int32_t> col;
  std::vector<double> val;
  std::int64_t rows() const { return static_cast<std::int64_t>(ptr.size()) - 1; }
};
FieldRows forward_field_rows(const GroupModel& model, int field_index,
                             const GridDomain& grid);

AssembledOperator assemble(std::shared_ptr<const GroupModel> model,
                           std::shared_ptr<const GridDomain> grid,
                           const Vec& potential);
AssembledOperator assemble(const GroupModel& model, const GridDomain& grid,
                           const Vec& potential);
AssembledOperator assemble(const GroupModel& model, const GridDomain& grid,
                           const std::function<double(std::span<const double>)>&
                               potential);
AssembledOperator assemble(const GroupModel& model, const GridDomain& grid);

/// Frame components sqrt(weight) * (S_j u) of the horizontal gradient.
std::vector<Vec> horizontal_gradient(const GroupModel& model,
                                     const GridDomain& grid, const Vec& u);

/// Riemann sum with the cell volume weight.
double integrate(const GridDomain& grid, const Vec& values);

/// Per-field horizontal energy parts ||D_j u||^2 entering the discrete
/// Dirichlet form: u . (A - diag(V)) u = weight * sum_j parts[j].
std::vector<double> dirichlet_form_parts(const GroupModel& model,
                                         const GridDomain& grid, const Vec& u);

}  // namespace sublab
