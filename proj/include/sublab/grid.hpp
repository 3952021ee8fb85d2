#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sublab {

/// Point predicate carving a subdomain out of the bounding box.
struct Indicator {
  enum class Type { Box, Ball };
  Type type = Type::Ball;
  std::vector<double> lo, hi;  // Box
  std::vector<double> center;  // Ball
  double radius = 0.0;

  bool contains(std::span<const double> p) const;
};

/// Dirichlet-clamped rectangular lattice: nodes strictly inside the box (and
/// inside the indicator, when given) are unknowns; everything else is a
/// homogeneous Dirichlet zero. Immutable after construction.
class GridDomain {
 public:
  int dim() const { return static_cast<int>(shape_.size()); }
  std::int64_t size() const { return static_cast<std::int64_t>(nodes_.size()); }
  double cell_volume() const { return cell_volume_; }
  const std::vector<std::array<double, 2>>& box() const { return box_; }
  const std::vector<double>& spacings() const { return h_; }

  /// Interior-candidate lattice planes per axis (nodes at lo + (i+1)h,
  /// i in [0, shape[a])).
  const std::vector<int>& shape() const { return shape_; }

  /// Node index for a lattice multi-index, or -1 if clamped.
  std::int64_t index_of(std::span<const int> lattice) const;
  void lattice_of(std::int64_t node, std::span<int> out) const;
  void point_of(std::int64_t node, std::span<double> out) const;
  std::vector<double> point_of(std::int64_t node) const;
  double coordinate(int axis, int lattice_index) const {
    return box_[axis][0] + (lattice_index + 1) * h_[axis];
  }

  /// Neighbor node along one axis, or -1 if clamped.
  std::int64_t neighbor(std::int64_t node, int axis, int step) const;

  /// Nodes whose full lattice neighborhood of L1 radius `radius` is interior;
  /// statistics of stencil-based fields are only trustworthy there.
  std::vector<char> trusted_mask(int l1_radius) const;

  std::string describe() const;

  friend GridDomain build_grid(std::vector<std::array<double, 2>> box,
                               std::vector<double> spacings,
                               const std::optional<Indicator>& indicator);

 private:
  std::vector<std::array<double, 2>> box_;
  std::vector<double> h_;
  std::vector<int> shape_;
  std::vector<std::int64_t> strides_;
  double cell_volume_ = 0.0;
  std::vector<std::int64_t> index_map_;  // lattice flat -> node, -1 clamped
  std::vector<std::int64_t> nodes_;      // node -> lattice flat
};

GridDomain build_grid(std::vector<std::array<double, 2>> box,
                      std::vector<double> spacings,
                      const std::optional<Indicator>& indicator = {});

}  // namespace sublab
