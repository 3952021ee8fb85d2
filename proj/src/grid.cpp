#include "sublab/grid.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>

namespace sublab {

bool Indicator::contains(std::span<const double> p) const {
  switch (type) {
    case Type::Box: {
      for (std::size_t a = 0; a < p.size(); ++a)
        if (p[a] <= lo[a] || p[a] >= hi[a]) return false;
      return true;
    }
    case Type::Ball: {
      double r2 = 0.0;
      for (std::size_t a = 0; a < p.size(); ++a) {
        const double d = p[a] - center[a];
        r2 += d * d;
      }
      return r2 < radius * radius;
    }
  }
  return false;
}

std::int64_t GridDomain::index_of(std::span<const int> lattice) const {
  std::int64_t flat = 0;
  for (int a = 0; a < dim(); ++a) {
    if (lattice[a] < 0 || lattice[a] >= shape_[a]) return -1;
    flat += strides_[a] * lattice[a];
  }
  return index_map_[flat];
}

void GridDomain::lattice_of(std::int64_t node, std::span<int> out) const {
  std::int64_t flat = nodes_[node];
  for (int a = 0; a < dim(); ++a) {
    out[a] = static_cast<int>(flat / strides_[a]);
    flat %= strides_[a];
  }
}

void GridDomain::point_of(std::int64_t node, std::span<double> out) const {
  std::int64_t flat = nodes_[node];
  for (int a = 0; a < dim(); ++a) {
    const int idx = static_cast<int>(flat / strides_[a]);
    flat %= strides_[a];
    out[a] = coordinate(a, idx);
  }
}

std::vector<double> GridDomain::point_of(std::int64_t node) const {
  std::vector<double> p(dim());
  point_of(node, p);
  return p;
}

std::int64_t GridDomain::neighbor(std::int64_t node, int axis, int step) const {
  std::int64_t flat = nodes_[node];
  const int idx = static_cast<int>(flat / strides_[axis] % shape_[axis]);
  const int moved = idx + step;
  if (moved < 0 || moved >= shape_[axis]) return -1;
  return index_map_[flat + static_cast<std::int64_t>(step) * strides_[axis]];
}

std::vector<char> GridDomain::trusted_mask(int l1_radius) const {
  std::vector<char> mask(nodes_.size(), 1);
  std::vector<int> base(dim()), probe(dim());
  // enumerate offsets with |offset|_1 <= radius
  std::vector<std::vector<int>> offsets;
  std::vector<int> cur(dim(), 0);
  std::function<void(int, int)> gen = [&](int axis, int budget) {
    if (axis == dim()) {
      offsets.push_back(cur);
      return;
    }
    for (int s = -budget; s <= budget; ++s) {
      cur[axis] = s;
      gen(axis + 1, budget - std::abs(s));
    }
    cur[axis] = 0;
  };
  gen(0, l1_radius);

  for (std::int64_t node = 0; node < size(); ++node) {
    lattice_of(node, base);
    for (const auto& off : offsets) {
      for (int a = 0; a < dim(); ++a) probe[a] = base[a] + off[a];
      if (index_of(probe) < 0) {
        mask[node] = 0;
        break;
      }
    }
  }
  return mask;
}

std::string GridDomain::describe() const {
  std::string s = "grid[";
  for (int a = 0; a < dim(); ++a) {
    if (a) s += ",";
    s += std::to_string(shape_[a]);
  }
  s += "] N=" + std::to_string(size());
  return s;
}

GridDomain build_grid(std::vector<std::array<double, 2>> box,
                      std::vector<double> spacings,
                      const std::optional<Indicator>& indicator) {
  if (box.empty()) throw std::invalid_argument("box must have at least one axis");
  if (spacings.size() != box.size())
    throw std::invalid_argument("spacings must match the box dimension");

  GridDomain g;
  g.box_ = std::move(box);
  g.h_ = std::move(spacings);
  const int dim = static_cast<int>(g.box_.size());

  g.cell_volume_ = 1.0;
  for (int a = 0; a < dim; ++a) {
    const double extent = g.box_[a][1] - g.box_[a][0];
    if (!(extent > 0.0)) throw std::invalid_argument("box axis is degenerate");
    if (!(g.h_[a] > 0.0)) throw std::invalid_argument("spacings must be positive");
    if (g.h_[a] >= extent)
      throw std::invalid_argument("spacing must be smaller than the box extent");
    const int k = static_cast<int>(std::floor(extent / g.h_[a] - 1e-12));
    if (k < 1) throw std::invalid_argument("spacing admits no interior node");
    g.shape_.push_back(k);
    g.cell_volume_ *= g.h_[a];
  }

  g.strides_.assign(dim, 1);
  for (int a = dim - 2; a >= 0; --a)
    g.strides_[a] = g.strides_[a + 1] * g.shape_[a + 1];
  const std::int64_t lattice_size = g.strides_[0] * g.shape_[0];

  g.index_map_.assign(lattice_size, -1);
  std::vector<int> idx(dim, 0);
  std::vector<double> p(dim);
  for (std::int64_t flat = 0; flat < lattice_size; ++flat) {
    std::int64_t rest = flat;
    for (int a = 0; a < dim; ++a) {
      idx[a] = static_cast<int>(rest / g.strides_[a]);
      rest %= g.strides_[a];
      p[a] = g.coordinate(a, idx[a]);
    }
    if (indicator && !indicator->contains(p)) continue;
    g.index_map_[flat] = static_cast<std::int64_t>(g.nodes_.size());
    g.nodes_.push_back(flat);
  }
  if (g.nodes_.empty())
    throw std::invalid_argument("grid has an empty interior");
  return g;
}

}  // namespace sublab
