#include "sublab/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sublab {

namespace {

struct RowEntry {
  std::int64_t col;
  double val;
};

// Visit the forward-difference row of one field at every closed-lattice node
// that touches an interior unknown. Rows at boundary nodes carry the
// Dirichlet edge terms that complete the quadratic form.
template <typename Callback>
void for_each_forward_row(const GroupModel& model, int field_index,
                          const GridDomain& grid, Callback&& cb) {
  const Field& field = model.field(field_index);
  const int dim = grid.dim();
  const auto& shape = grid.shape();
  const auto& h = grid.spacings();

  std::vector<int> idx(dim, -1), probe(dim);
  std::vector<double> p(dim);
  std::vector<RowEntry> ents;
  ents.reserve(field.size() + 1);

  bool done = false;
  while (!done) {
    for (int a = 0; a < dim; ++a) p[a] = grid.coordinate(a, idx[a]);
    ents.clear();
    std::copy(idx.begin(), idx.end(), probe.begin());
    const std::int64_t row_node = grid.index_of(probe);
    double diag = 0.0;
    for (const auto& term : field) {
      const double c = term.coeff(p);
      if (c == 0.0) continue;
      probe[term.axis] = idx[term.axis] + 1;
      const std::int64_t nb = grid.index_of(probe);
      probe[term.axis] = idx[term.axis];
      if (nb >= 0) ents.push_back({nb, c / h[term.axis]});
      if (row_node >= 0) diag -= c / h[term.axis];
    }
    if (row_node >= 0 && diag != 0.0) ents.push_back({row_node, diag});
    if (!ents.empty()) cb(ents);

    // odometer over [-1, shape[a]-1] per axis
    for (int a = dim - 1; a >= 0; --a) {
      if (++idx[a] < shape[a]) break;
      idx[a] = -1;
      if (a == 0) done = true;
    }
    if (dim == 0) done = true;
  }
}

struct Trip {
  std::int32_t r, c;
  double v;
};

}  // namespace

AssembledOperator AssembledOperator::from_matrix(SparseMat m, double cell_volume) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("operator matrix must be square");
  AssembledOperator op;
  op.matrix = std::move(m);
  op.cell_volume = cell_volume;
  return op;
}

SparseMat first_order_operator(const GroupModel& model, int field_index,
                               const GridDomain& grid) {
  if (field_index < 0 || field_index >= model.horizontal_rank())
    throw std::invalid_argument("field index out of range");
  if (grid.dim() != model.ambient_dim())
    throw std::invalid_argument("grid dimension does not match the model");

  const Field& field = model.field(field_index);
  const std::int64_t n = grid.size();
  const auto& h = grid.spacings();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * field.size() * n);
  std::vector<double> p(grid.dim());
  for (std::int64_t node = 0; node < n; ++node) {
    grid.point_of(node, p);
    for (const auto& term : field) {
      const double c = term.coeff(p);
      if (c == 0.0) continue;
      const double v = c / (2.0 * h[term.axis]);
      const std::int64_t fwd = grid.neighbor(node, term.axis, +1);
      const std::int64_t bwd = grid.neighbor(node, term.axis, -1);
      if (fwd >= 0) trips.emplace_back(node, fwd, v);
      if (bwd >= 0) trips.emplace_back(node, bwd, -v);
    }
  }
  SparseMat s(n, n);
  s.setFromTriplets(trips.begin(), trips.end());
  s.makeCompressed();
  return s;
}

FieldRows forward_field_rows(const GroupModel& model, int field_index,
                             const GridDomain& grid) {
  FieldRows out;
  out.ptr.push_back(0);
  for_each_forward_row(model, field_index, grid,
                       [&](const std::vector<RowEntry>& ents) {
                         for (const auto& e : ents) {
                           out.col.push_back(static_cast<std::int32_t>(e.col));
                           out.val.push_back(e.val);
                         }
                         out.ptr.push_back(static_cast<std::int64_t>(out.col.size()));
                       });
  return out;
}

AssembledOperator assemble(std::shared_ptr<const GroupModel> model,
                           std::shared_ptr<const GridDomain> grid,
                           const Vec& potential) {
  const std::int64_t n = grid->size();
  if (potential.size() != n)
    throw std::invalid_argument("potential must have one value per node");
  if (!potential.allFinite())
    throw std::invalid_argument("potential must be finite at every node");
  if (n > (std::int64_t{1} << 31) - 2)
    throw std::invalid_argument("grid too large for 32-bit sparse indices");

  const double w = model->levi_weight();
  std::vector<Trip> trips;

  for (int j = 0; j < model->horizontal_rank(); ++j) {
    for_each_forward_row(*model, j, *grid, [&](const std::vector<RowEntry>& ents) {
      for (std::size_t a = 0; a < ents.size(); ++a) {
        for (std::size_t b = a; b < ents.size(); ++b) {
          const double v = w * ents[a].val * ents[b].val;
          auto r = static_cast<std::int32_t>(ents[a].col);
          auto c = static_cast<std::int32_t>(ents[b].col);
          if (r > c) std::swap(r, c);
          trips.push_back({r, c, v});
        }
      }
    });
  }
  const bool zero_v = (potential.cwiseAbs().maxCoeff() == 0.0);
  if (!zero_v) {
    for (std::int64_t i = 0; i < n; ++i) {
      if (potential[i] != 0.0)
        trips.push_back({static_cast<std::int32_t>(i),
                         static_cast<std::int32_t>(i), potential[i]});
    }
  }

  // Stable sort keeps the traversal order within each (r,c); mirrored entries
  // below receive the same accumulated double, so the matrix is symmetric
  // bit-for-bit.
  std::stable_sort(trips.begin(), trips.end(), [](const Trip& x, const Trip& y) {
    return x.r != y.r ? x.r < y.r : x.c < y.c;
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < trips.size();) {
    Trip acc = trips[i];
    std::size_t j = i + 1;
    while (j < trips.size() && trips[j].r == acc.r && trips[j].c == acc.c) {
      acc.v += trips[j].v;
      ++j;
    }
    trips[out++] = acc;
    i = j;
  }
  trips.resize(out);

  using StorageIndex = SparseMat::StorageIndex;
  std::vector<StorageIndex> nnz_row(n, 0);
  for (const auto& t : trips) {
    ++nnz_row[t.r];
    if (t.c != t.r) ++nnz_row[t.c];
  }
  std::vector<StorageIndex> outer(n + 1, 0);
  for (std::int64_t i = 0; i < n; ++i) outer[i + 1] = outer[i] + nnz_row[i];
  const std::int64_t nnz = outer[n];
  std::vector<StorageIndex> inner(nnz);
  std::vector<double> vals(nnz);
  std::vector<StorageIndex> cursor(outer.begin(), outer.end() - 1);
  for (const auto& t : trips) {
    inner[cursor[t.r]] = t.c;
    vals[cursor[t.r]++] = t.v;
    if (t.c != t.r) {
      inner[cursor[t.c]] = t.r;
      vals[cursor[t.c]++] = t.v;
    }
  }
  Eigen::Map<const SparseMat> view(n, n, nnz, outer.data(), inner.data(),
                                   vals.data());

  AssembledOperator op;
  op.matrix = view;
  op.cell_volume = grid->cell_volume();
  op.potential_min = zero_v ? 0.0 : potential.minCoeff();
  op.zero_potential = zero_v;
  op.model = std::move(model);
  op.grid = std::move(grid);
  return op;
}

AssembledOperator assemble(const GroupModel& model, const GridDomain& grid,
                           const Vec& potential) {
  return assemble(std::make_shared<GroupModel>(model),
                  std::make_shared<GridDomain>(grid), potential);
}

AssembledOperator assemble(const GroupModel& model, const GridDomain& grid,
                           const std::function<double(std::span<const double>)>&
                               potential) {
  Vec v(grid.size());
  std::vector<double> p(grid.dim());
  for (std::int64_t node = 0; node < grid.size(); ++node) {
    grid.point_of(node, p);
    v[node] = potential(p);
  }
  return assemble(model, grid, v);
}

AssembledOperator assemble(const GroupModel& model, const GridDomain& grid) {
  return assemble(model, grid, Vec::Zero(grid.size()));
}

std::vector<Vec> horizontal_gradient(const GroupModel& model,
                                     const GridDomain& grid, const Vec& u) {
  if (u.size() != grid.size())
    throw std::invalid_argument("vector length does not match the grid");
  const double sw = std::sqrt(model.levi_weight());
  std::vector<Vec> comps;
  comps.reserve(model.horizontal_rank());
  for (int j = 0; j < model.horizontal_rank(); ++j) {
    SparseMat s = first_order_operator(model, j, grid);
    comps.push_back(sw * (s * u));
  }
  return comps;
}

double integrate(const GridDomain& grid, const Vec& values) {
  if (values.size() != grid.size())
    throw std::invalid_argument("vector length does not match the grid");
  return values.sum() * grid.cell_volume();
}

std::vector<double> dirichlet_form_parts(const GroupModel& model,
                                         const GridDomain& grid, const Vec& u) {
  if (u.size() != grid.size())
    throw std::invalid_argument("vector length does not match the grid");
  std::vector<double> parts;
  parts.reserve(model.horizontal_rank());
  for (int j = 0; j < model.horizontal_rank(); ++j) {
    double sum = 0.0;
    for_each_forward_row(model, j, grid, [&](const std::vector<RowEntry>& ents) {
      double du = 0.0;
      for (const auto& e : ents) du += e.val * u[e.col];
      sum += du * du;
    });
    parts.push_back(sum);
  }
  return parts;
}

}  // namespace sublab
