#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pinning {

/// A point of Z^d. The dimension is the vector length.
using Point = std::vector<int>;

/// |x| = max_i |x_i|.
int sup_norm(const Point& x);
/// sum_i |x_i - y_i|; a lazy nearest-neighbour step has l1 distance at most 1.
int l1_distance(const Point& x, const Point& y);
Point origin(int dim);
/// e_1 = (1, 0, ..., 0).
Point unit_e1(int dim);
std::string to_string(const Point& x);

/// Sup-norm ball [-R, R]^d, enumerated lexicographically (first coordinate
/// slowest). Neighbour lists for the lazy walk are precomputed and shared
/// between copies.
class Window {
 public:
  Window(int dim, int radius);

  int dim() const noexcept { return dim_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return layout_->sup_norms.size(); }

  bool contains(const Point& x) const;
  /// Throws RangeError when x is outside the window.
  std::size_t index(const Point& x) const;
  Point point(std::size_t index) const;
  std::size_t origin_index() const noexcept { return layout_->origin; }
  int sup_norm_at(std::size_t index) const { return layout_->sup_norms[index]; }

  /// In-window points reachable in one lazy step from `index` (itself included).
  std::span<const std::uint32_t> neighbors(std::size_t index) const {
    const auto b = layout_->offsets[index];
    const auto e = layout_->offsets[index + 1];
    return {layout_->adjacency.data() + b, e - b};
  }

  friend bool operator==(const Window& a, const Window& b) noexcept {
    return a.dim_ == b.dim_ && a.radius_ == b.radius_;
  }

 private:
  struct Layout {
    std::vector<int> sup_norms;
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> adjacency;
    std::size_t origin = 0;
  };

  int dim_;
  int radius_;
  std::shared_ptr<const Layout> layout_;
};

/// Lazy-walk trajectory gamma(n), n in [n1, n2].
struct PathSegment {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::vector<Point> positions;  // positions[k] = gamma(n1 + k)

  const Point& at(std::int64_t n) const;
  std::int64_t length() const noexcept { return n2 - n1; }
  /// Every step stays put or moves to one of the 2d nearest neighbours.
  bool admissible() const;
  /// Throws ValidationError with the offending time when not admissible.
  void validate() const;

  friend bool operator==(const PathSegment&, const PathSegment&) = default;
};

}  // namespace pinning
