#pragma once

#include "sublab/assemble.hpp"
#include "sublab/eigensolve.hpp"

#include <string>
#include <vector>

namespace sublab {

enum class TargetKind { Euclidean, Heisenberg };

/// A map sampled on the grid nodes. Euclidean targets carry m component
/// vectors; Heisenberg targets carry 2m+1 in the order
/// phi_1..phi_m, psi_1..psi_m, alpha.
struct MapSample {
  TargetKind target = TargetKind::Euclidean;
  int m = 0;
  std::vector<Vec> components;

  void validate(std::int64_t n_nodes) const;
  /// Rejects maps whose target is too small for the model's horizontal rank.
  void validate_for(const GroupModel& model, const GridDomain& grid) const;
};

/// Levi-tension samples. Euclidean targets: m component vectors. Heisenberg
/// targets: exactly 2m components (the phi/psi pairs); the representation
/// carries no vertical slot because the tension is horizontal.
struct TensionField {
  TargetKind target = TargetKind::Euclidean;
  int m = 0;
  std::vector<Vec> values;
  Vec norm_sq;
  std::vector<char> trusted;  // nodes with a fully interior stencil
};

TensionField levi_tension_euclidean(const AssembledOperator& A,
                                    const MapSample& f);
TensionField levi_tension_heisenberg(const AssembledOperator& A,
                                     const MapSample& f);

/// Per-node semi-isometry defect: max over the G-orthonormal frame directions
/// of | |df(e_i)|^2 - 1 | plus the vertical-orthogonality defect. Values near
/// the boundary are untrusted; take statistics on a trusted mask.
Vec semi_isometry_residual(const GroupModel& model, const GridDomain& grid,
                           const MapSample& f);

/// Max over trusted nodes and frame directions of
/// |<H_b, df(e_i)>_target| / (1 + |H_b|). Requires the map to be
/// semi-isometric within `semi_iso_tol` on trusted nodes.
double orthogonality_residual(const GroupModel& model, const GridDomain& grid,
                              const MapSample& f, const TensionField& tension,
                              double semi_iso_tol = 0.25);

struct DCoefficients {
  std::vector<double> d;  // per eigenpair: integral of (|H_b|^2 - 4V) u_i^2
  double d_inf = 0.0;     // sup over interior nodes of |H_b|^2 - 4V
};
DCoefficients d_coefficients(const GridDomain& grid, const TensionField& tension,
                             const Vec& potential, const Spectrum& spectrum);

struct ReillyQuantities {
  double energy = 0.0;            // integral of the horizontal energy density
  double tension_integral = 0.0;  // integral of |H_b|^2
  double volume = 0.0;
  double coverage = 0.0;          // trusted-node fraction used for the integrals
};
ReillyQuantities reilly_quantities(const GridDomain& grid, const GroupModel& model,
                                   const MapSample& f, const TensionField& tension,
                                   double coverage_min = 0.25);

/// Built-in map presets: "projection", "scaled_projection", "identity",
/// "coordinates".
MapSample map_preset(const std::string& name, const GroupModel& model,
                     const GridDomain& grid);

/// Synthetic tension field with constant squared norm (target presets whose
/// tension norm is known in closed form, e.g. the round-sphere embedding).
TensionField constant_tension_field(const GridDomain& grid, double norm_sq_value);

}  // namespace sublab
