#include "sublab/tension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sublab {

namespace {

// Plain centered difference along one coordinate axis (unit coefficient);
// used for derivatives along the vertical directions.
SparseMat centered_axis_difference(const GridDomain& grid, int axis) {
  const std::int64_t n = grid.size();
  const double v = 1.0 / (2.0 * grid.spacings()[axis]);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * n);
  for (std::int64_t node = 0; node < n; ++node) {
    const std::int64_t fwd = grid.neighbor(node, axis, +1);
    const std::int64_t bwd = grid.neighbor(node, axis, -1);
    if (fwd >= 0) trips.emplace_back(node, fwd, v);
    if (bwd >= 0) trips.emplace_back(node, bwd, -v);
  }
  SparseMat s(n, n);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

// df of every map component along the G-orthonormal frame e_j = sqrt(w) X_j.
std::vector<std::vector<Vec>> frame_differentials(const GroupModel& model,
                                                  const GridDomain& grid,
                                                  const MapSample& f) {
  const double sw = std::sqrt(model.levi_weight());
  std::vector<std::vector<Vec>> g(model.horizontal_rank());
  for (int j = 0; j < model.horizontal_rank(); ++j) {
    SparseMat s = first_order_operator(model, j, grid);
    g[j].reserve(f.components.size());
    for (const auto& comp : f.components) g[j].push_back(sw * (s * comp));
  }
  return g;
}

std::vector<std::vector<Vec>> vertical_differentials(const GroupModel& model,
                                                     const GridDomain& grid,
                                                     const MapSample& f) {
  std::vector<std::vector<Vec>> g;
  for (int axis : model.vertical_axes()) {
    SparseMat d = centered_axis_difference(grid, axis);
    std::vector<Vec> comps;
    comps.reserve(f.components.size());
    for (const auto& comp : f.components) comps.push_back(d * comp);
    g.push_back(std::move(comps));
  }
  return g;
}

// Target-metric helpers. `dv` holds the derivative of every component in one
// direction at one node. Heisenberg targets use the frame decomposition of
// the tangent vector, whose vertical part is read off the contact form at the
// image point.
struct TargetGeometry {
  const MapSample& f;
  std::int64_t node = 0;

  double theta(const std::vector<Vec>& dv) const {
    const int m = f.m;
    double th = dv[2 * m][node];
    for (int j = 0; j < m; ++j)
      th += 2.0 * (dv[m + j][node] * f.components[j][node] -
                   dv[j][node] * f.components[m + j][node]);
    return th;
  }
  double norm_sq(const std::vector<Vec>& dv) const {
    if (f.target == TargetKind::Euclidean) {
      double s = 0.0;
      for (const auto& c : dv) s += c[node] * c[node];
      return s;
    }
    const int m = f.m;
    double s = 0.0;
    for (int j = 0; j < 2 * m; ++j) s += dv[j][node] * dv[j][node];
    const double th = theta(dv);
    return 4.0 * s + th * th;
  }
  double inner(const std::vector<Vec>& du, const std::vector<Vec>& dv) const {
    if (f.target == TargetKind::Euclidean) {
      double s = 0.0;
      for (std::size_t a = 0; a < du.size(); ++a) s += du[a][node] * dv[a][node];
      return s;
    }
    const int m = f.m;
    double s = 0.0;
    for (int j = 0; j < 2 * m; ++j) s += du[j][node] * dv[j][node];
    return 4.0 * s + theta(du) * theta(dv);
  }
};

}  // namespace

void MapSample::validate(std::int64_t n_nodes) const {
  const std::size_t expected =
      target == TargetKind::Euclidean ? m : 2 * static_cast<std::size_t>(m) + 1;
  if (components.size() != expected)
    throw std::invalid_argument("map has the wrong number of components");
  for (const auto& c : components)
    if (c.size() != n_nodes)
      throw std::invalid_argument("map component length does not match the grid");
}

void MapSample::validate_for(const GroupModel& model, const GridDomain& grid) const {
  validate(grid.size());
  const int rank = model.horizontal_rank();
  const int target_horizontal = target == TargetKind::Euclidean ? m : 2 * m;
  if (target_horizontal < rank)
    throw std::invalid_argument(
        "map target dimension is below the model's horizontal rank");
}

TensionField levi_tension_euclidean(const AssembledOperator& A, const MapSample& f) {
  if (f.target != TargetKind::Euclidean)
    throw std::invalid_argument("expected a Euclidean-target map");
  if (!A.zero_potential)
    throw std::invalid_argument("tension requires a potential-free operator");
  if (!A.grid) throw std::invalid_argument("operator carries no grid");
  f.validate(A.size());

  TensionField t;
  t.target = TargetKind::Euclidean;
  t.m = f.m;
  t.norm_sq = Vec::Zero(A.size());
  for (const auto& comp : f.components) {
    Vec v = -(A.matrix * comp);
    t.norm_sq.array() += v.array().square();
    t.values.push_back(std::move(v));
  }
  t.trusted = A.grid->trusted_mask(2);
  return t;
}

TensionField levi_tension_heisenberg(const AssembledOperator& A, const MapSample& f) {
  if (f.target != TargetKind::Heisenberg)
    throw std::invalid_argument("expected a Heisenberg-target map");
  if (!A.zero_potential)
    throw std::invalid_argument("tension requires a potential-free operator");
  if (!A.grid) throw std::invalid_argument("operator carries no grid");
  f.validate(A.size());

  // alpha is never differentiated: only the 2m horizontal components enter.
  TensionField t;
  t.target = TargetKind::Heisenberg;
  t.m = f.m;
  t.norm_sq = Vec::Zero(A.size());
  for (int j = 0; j < 2 * f.m; ++j) {
    Vec v = -(A.matrix * f.components[j]);
    t.norm_sq.array() += v.array().square();
    t.values.push_back(std::move(v));
  }
  t.norm_sq *= 4.0;
  t.trusted = A.grid->trusted_mask(2);
  return t;
}

Vec semi_isometry_residual(const GroupModel& model, const GridDomain& grid,
                           const MapSample& f) {
  f.validate_for(model, grid);
  const auto g = frame_differentials(model, grid, f);
  const auto xi = vertical_differentials(model, grid, f);

  Vec out(grid.size());
  for (std::int64_t node = 0; node < grid.size(); ++node) {
    TargetGeometry geom{f, node};
    double metric = 0.0, vdef = 0.0;
    for (const auto& dir : g) {
      metric = std::max(metric, std::abs(geom.norm_sq(dir) - 1.0));
      for (const auto& vert : xi)
        vdef = std::max(vdef, std::abs(geom.inner(dir, vert)));
    }
    out[node] = metric + vdef;
  }
  return out;
}

double orthogonality_residual(const GroupModel& model, const GridDomain& grid,
                              const MapSample& f, const TensionField& tension,
                              double semi_iso_tol) {
  f.validate_for(model, grid);
  if (tension.norm_sq.size() != grid.size())
    throw std::invalid_argument("tension field does not match the grid");

  const Vec siso = semi_isometry_residual(model, grid, f);
  double worst_siso = 0.0;
  for (std::int64_t node = 0; node < grid.size(); ++node)
    if (tension.trusted[node]) worst_siso = std::max(worst_siso, siso[node]);
  if (worst_siso > semi_iso_tol)
    throw std::invalid_argument(
        "map is not semi-isometric within tolerance (defect " +
        std::to_string(worst_siso) + ")");

  const auto g = frame_differentials(model, grid, f);
  double worst = 0.0;
  for (std::int64_t node = 0; node < grid.size(); ++node) {
    if (!tension.trusted[node]) continue;
    const double denom = 1.0 + std::sqrt(tension.norm_sq[node]);
    for (const auto& dir : g) {
      double ip = 0.0;
      if (tension.target == TargetKind::Euclidean) {
        for (int a = 0; a < tension.m; ++a)
          ip += tension.values[a][node] * dir[a][node];
      } else {
        // both vectors horizontal in the target frame
        for (int j = 0; j < 2 * tension.m; ++j)
          ip += tension.values[j][node] * dir[j][node];
        ip *= 4.0;
      }
      worst = std::max(worst, std::abs(ip) / denom);
    }
  }
  return worst;
}

DCoefficients d_coefficients(const GridDomain& grid, const TensionField& tension,
                             const Vec& potential, const Spectrum& spectrum) {
  if (spectrum.vectors.cols() == 0)
    throw std::invalid_argument("d coefficients require eigenvectors");
  if (tension.norm_sq.size() != grid.size() || potential.size() != grid.size() ||
      spectrum.vectors.rows() != grid.size())
    throw std::invalid_argument("size mismatch");

  // Untrusted boundary-ring values of a sampled tension field are stencil
  // artifacts (the map has no extension outside the domain); the tension part
  // is zeroed there. The potential part is well-defined at every node.
  // Synthetic fields trust every node, so closed-form presets are unaffected.
  Vec weight(grid.size());
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    const bool ok = tension.trusted.empty() || tension.trusted[i];
    weight[i] = (ok ? tension.norm_sq[i] : 0.0) - 4.0 * potential[i];
  }
  DCoefficients out;
  out.d.reserve(spectrum.vectors.cols());
  for (int i = 0; i < spectrum.vectors.cols(); ++i) {
    const Vec integrand =
        weight.array() * spectrum.vectors.col(i).array().square();
    out.d.push_back(integrate(grid, integrand));
  }
  out.d_inf = weight.maxCoeff();
  return out;
}

ReillyQuantities reilly_quantities(const GridDomain& grid, const GroupModel& model,
                                   const MapSample& f, const TensionField& tension,
                                   double coverage_min) {
  f.validate_for(model, grid);
  const auto g = frame_differentials(model, grid, f);

  std::int64_t n_trusted = 0;
  double energy_sum = 0.0, tension_sum = 0.0;
  for (std::int64_t node = 0; node < grid.size(); ++node) {
    if (!tension.trusted[node]) continue;
    ++n_trusted;
    TargetGeometry geom{f, node};
    double eb = 0.0;
    for (const auto& dir : g) eb += geom.norm_sq(dir);
    energy_sum += 0.5 * eb;
    tension_sum += tension.norm_sq[node];
  }
  ReillyQuantities q;
  q.coverage = static_cast<double>(n_trusted) / static_cast<double>(grid.size());
  if (q.coverage < coverage_min)
    throw std::runtime_error("insufficient trusted-node coverage: " +
                             std::to_string(q.coverage));
  q.energy = energy_sum * grid.cell_volume();
  q.tension_integral = tension_sum * grid.cell_volume();
  q.volume = static_cast<double>(grid.size()) * grid.cell_volume();
  return q;
}

MapSample map_preset(const std::string& name, const GroupModel& model,
                     const GridDomain& grid) {
  const std::int64_t n = grid.size();
  auto coordinate_vec = [&](int axis) {
    Vec v(n);
    std::vector<double> p(grid.dim());
    for (std::int64_t node = 0; node < n; ++node) {
      grid.point_of(node, p);
      v[node] = p[axis];
    }
    return v;
  };

  MapSample f;
  if (name == "projection" || name == "scaled_projection") {
    const double scale = name == "projection" ? 1.0 : 2.0;
    f.target = TargetKind::Euclidean;
    f.m = model.horizontal_rank();
    // horizontal coordinates: x/y block for Heisenberg, first layer otherwise
    for (int j = 0; j < f.m; ++j) f.components.push_back(scale * coordinate_vec(j));
  } else if (name == "coordinates") {
    f.target = TargetKind::Euclidean;
    f.m = model.kind() == GroupKind::CarnotStep2 ? model.carnot_d1()
                                                 : model.horizontal_rank();
    for (int j = 0; j < f.m; ++j) f.components.push_back(coordinate_vec(j));
  } else if (name == "identity") {
    if (model.kind() != GroupKind::Heisenberg)
      throw std::invalid_argument("identity preset requires a Heisenberg model");
    f.target = TargetKind::Heisenberg;
    f.m = model.cr_n();
    for (int j = 0; j < 2 * f.m + 1; ++j) f.components.push_back(coordinate_vec(j));
  } else {
    throw std::invalid_argument("unknown map preset: " + name);
  }
  f.validate(n);
  return f;
}

TensionField constant_tension_field(const GridDomain& grid, double norm_sq_value) {
  TensionField t;
  t.target = TargetKind::Euclidean;
  t.m = 0;
  t.norm_sq = Vec::Constant(grid.size(), norm_sq_value);
  t.trusted.assign(grid.size(), 1);
  return t;
}

}  // namespace sublab
