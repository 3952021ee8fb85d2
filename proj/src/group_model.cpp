#include "sublab/group_model.hpp"

#include "sublab/grid.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sublab {

double AffineFn::slope(int coord) const {
  for (const auto& [a, g] : slopes)
    if (a == coord) return g;
  return 0.0;
}

GroupModel GroupModel::heisenberg(int n) {
  if (n < 1) throw std::invalid_argument("heisenberg model requires n >= 1");
  GroupModel m;
  m.kind_ = GroupKind::Heisenberg;
  m.cr_n_ = n;
  m.ambient_dim_ = 2 * n + 1;
  // G-orthonormal frame is X_j/2, Y_j/2, hence the 1/4 on the sum of squares.
  m.levi_weight_ = 0.25;
  m.vertical_axes_ = {2 * n};
  m.fields_.resize(2 * n);
  for (int j = 0; j < n; ++j) {
    // X_j = d/dx_j + 2 y_j d/dt
    m.fields_[j] = {FieldTerm{j, AffineFn{0.0, {}}},
                    FieldTerm{2 * n, AffineFn{0.0, {{n + j, 2.0}}}}};
    m.fields_[j][0].coeff.constant = 1.0;
    // Y_j = d/dy_j - 2 x_j d/dt
    m.fields_[n + j] = {FieldTerm{n + j, AffineFn{1.0, {}}},
                        FieldTerm{2 * n, AffineFn{0.0, {{j, -2.0}}}}};
  }
  return m;
}

GroupModel GroupModel::carnot_step2(int d1, int d2, const StructureConstants& c) {
  if (d1 < 2) throw std::invalid_argument("carnot model requires d1 >= 2");
  if (d2 < 1) throw std::invalid_argument("carnot model requires d2 >= 1");
  if (static_cast<int>(c.size()) != d2)
    throw std::invalid_argument("structure constants must have d2 layers");
  for (const auto& ck : c) {
    if (ck.rows() != d1 || ck.cols() != d1)
      throw std::invalid_argument("structure constant layers must be d1 x d1");
    if ((ck + ck.transpose()).cwiseAbs().maxCoeff() != 0.0)
      throw std::invalid_argument("structure constants must be antisymmetric");
  }
  // Bracket-generating check: the pair vectors c^._{ij} must span R^{d2}.
  const int npairs = d1 * (d1 - 1) / 2;
  Eigen::MatrixXd span(d2, npairs);
  int col = 0;
  for (int i = 0; i < d1; ++i)
    for (int j = i + 1; j < d1; ++j, ++col)
      for (int k = 0; k < d2; ++k) span(k, col) = c[k](i, j);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(span);
  lu.setThreshold(1e-12);
  if (lu.rank() < d2)
    throw std::invalid_argument(
        "structure constants are not bracket-generating: a vertical direction "
        "is unreachable");

  GroupModel m;
  m.kind_ = GroupKind::CarnotStep2;
  m.d1_ = d1;
  m.d2_ = d2;
  m.c_ = c;
  m.ambient_dim_ = d1 + d2;
  m.levi_weight_ = 1.0;
  for (int k = 0; k < d2; ++k) m.vertical_axes_.push_back(d1 + k);
  m.fields_.resize(d1);
  // First-kind exponential coordinates: X_i = d/dx_i + 1/2 sum_kj c^k_{ji} x_j d/dt_k,
  // chosen so that X_j x_i = delta_ij and the coordinate functions are harmonic.
  for (int i = 0; i < d1; ++i) {
    Field f;
    f.push_back(FieldTerm{i, AffineFn{1.0, {}}});
    for (int k = 0; k < d2; ++k) {
      AffineFn coeff;
      for (int j = 0; j < d1; ++j) {
        const double v = 0.5 * c[k](j, i);
        if (v != 0.0) coeff.slopes.emplace_back(j, v);
      }
      if (!coeff.slopes.empty()) f.push_back(FieldTerm{d1 + k, coeff});
    }
    m.fields_[i] = std::move(f);
  }
  return m;
}

GroupModel GroupModel::abelian(int d) {
  if (d < 1) throw std::invalid_argument("abelian model requires d >= 1");
  GroupModel m;
  m.kind_ = GroupKind::Abelian;
  m.ambient_dim_ = d;
  m.levi_weight_ = 1.0;
  m.fields_.resize(d);
  for (int i = 0; i < d; ++i) m.fields_[i] = {FieldTerm{i, AffineFn{1.0, {}}}};
  return m;
}

double GroupModel::bracket_constant(int i, int j, int axis) const {
  switch (kind_) {
    case GroupKind::Abelian:
      return 0.0;
    case GroupKind::Heisenberg: {
      if (axis != 2 * cr_n_) return 0.0;
      // [X_a, Y_b] = -4 delta_ab T; all other horizontal brackets vanish.
      const int n = cr_n_;
      if (i < n && j >= n && j - n == i) return -4.0;
      if (j < n && i >= n && i - n == j) return 4.0;
      return 0.0;
    }
    case GroupKind::CarnotStep2: {
      if (axis < d1_) return 0.0;
      return c_[axis - d1_](i, j);
    }
  }
  return 0.0;
}

double GroupModel::skew_adjointness_defect() const {
  double defect = 0.0;
  for (const auto& field : fields_) {
    for (const auto& term : field) {
      for (const auto& other : field) {
        defect = std::max(defect, std::abs(term.coeff.slope(other.axis)));
      }
    }
  }
  return defect;
}

std::string GroupModel::describe() const {
  switch (kind_) {
    case GroupKind::Heisenberg:
      return "heisenberg(n=" + std::to_string(cr_n_) + ")";
    case GroupKind::CarnotStep2:
      return "carnot_step2(d1=" + std::to_string(d1_) +
             ",d2=" + std::to_string(d2_) + ")";
    case GroupKind::Abelian:
      return "abelian(d=" + std::to_string(ambient_dim_) + ")";
  }
  return "?";
}

void GroupModel::override_field_term_for_diagnostics(int field, int term,
                                                     AffineFn coeff) {
  fields_.at(field).at(term).coeff = std::move(coeff);
}

namespace {

// Coefficient function of d/dx_axis in the given field (zero if absent).
const AffineFn* coeff_of(const Field& f, int axis) {
  for (const auto& t : f)
    if (t.axis == axis) return &t.coeff;
  return nullptr;
}

// Directional derivative of an affine function along a field, itself affine:
// X(phi)(p) = sum_a c_a(p) * slope_a(phi).
AffineFn field_derivative(const Field& f, const AffineFn& phi) {
  AffineFn out;
  for (const auto& t : f) {
    const double s = phi.slope(t.axis);
    if (s == 0.0) continue;
    out.constant += s * t.coeff.constant;
    for (const auto& [a, g] : t.coeff.slopes) {
      bool merged = false;
      for (auto& [b, gb] : out.slopes)
        if (b == a) {
          gb += s * g;
          merged = true;
          break;
        }
      if (!merged) out.slopes.emplace_back(a, s * g);
    }
  }
  return out;
}

}  // namespace

double bracket_residual(const GroupModel& model, const GridDomain& grid) {
  const int rank = model.horizontal_rank();
  const int dim = model.ambient_dim();
  if (grid.dim() != dim)
    throw std::invalid_argument("grid dimension does not match the model");

  // Sample a deterministic subset of interior nodes (affine discrepancies are
  // exact at any point, so sampling only matters for corrupted models).
  const std::int64_t n = grid.size();
  const std::int64_t stride = std::max<std::int64_t>(1, n / 512);

  double worst = 0.0;
  std::vector<double> p(dim);
  for (int i = 0; i < rank; ++i) {
    for (int j = i + 1; j < rank; ++j) {
      for (int b = 0; b < dim; ++b) {
        const AffineFn* cj = coeff_of(model.field(j), b);
        const AffineFn* ci = coeff_of(model.field(i), b);
        AffineFn comm;  // coefficient of d/dx_b in [X_i, X_j]
        if (cj) comm = field_derivative(model.field(i), *cj);
        if (ci) {
          AffineFn back = field_derivative(model.field(j), *ci);
          comm.constant -= back.constant;
          for (const auto& [a, g] : back.slopes) {
            bool merged = false;
            for (auto& [bb, gb] : comm.slopes)
              if (bb == a) {
                gb -= g;
                merged = true;
                break;
              }
            if (!merged) comm.slopes.emplace_back(a, -g);
          }
        }
        const double expected = model.bracket_constant(i, j, b);
        if (comm.slopes.empty()) {
          worst = std::max(worst, std::abs(comm.constant - expected));
          continue;
        }
        for (std::int64_t node = 0; node < n; node += stride) {
          grid.point_of(node, p);
          worst = std::max(worst, std::abs(comm(p) - expected));
        }
      }
    }
  }
  return worst;
}

}  // namespace sublab
