#include "pinning/lattice.hpp"

#include <cstdlib>

#include "pinning/errors.hpp"

namespace pinning {

int sup_norm(const Point& x) {
  int m = 0;
  for (int c : x) m = std::max(m, std::abs(c));
  return m;
}

int l1_distance(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw ShapeError("l1_distance: dimension mismatch");
  int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s;
}

Point origin(int dim) { return Point(static_cast<std::size_t>(dim), 0); }

Point unit_e1(int dim) {
  Point e = origin(dim);
  e[0] = 1;
  return e;
}

std::string to_string(const Point& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

Window::Window(int dim, int radius) : dim_(dim), radius_(radius) {
  if (dim < 1) throw ParameterError("Window: dimension must be >= 1");
  if (radius < 0) throw ParameterError("Window: radius must be >= 0");
  const std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) {
    if (n > (std::size_t{1} << 31) / side) throw SizeError("Window: too many points");
    n *= side;
  }

  auto layout = std::make_shared<Layout>();
  layout->sup_norms.resize(n);
  layout->offsets.reserve(n + 1);
  layout->adjacency.reserve(n * (2 * static_cast<std::size_t>(dim) + 1));

  // stride of coordinate k in the lexicographic order (coordinate 0 slowest)
  std::vector<std::size_t> stride(static_cast<std::size_t>(dim));
  std::size_t s = 1;
  for (int k = dim - 1; k >= 0; --k) {
    stride[static_cast<std::size_t>(k)] = s;
    s *= side;
  }

  Point x(static_cast<std::size_t>(dim), -radius);
  for (std::size_t i = 0; i < n; ++i) {
    layout->sup_norms[i] = sup_norm(x);
    layout->offsets.push_back(layout->adjacency.size());
    // ascending index order: -e_k moves (slow coordinates first), self, +e_k moves
    for (int k = 0; k < dim; ++k) {
      if (x[static_cast<std::size_t>(k)] > -radius)
        layout->adjacency.push_back(static_cast<std::uint32_t>(i - stride[static_cast<std::size_t>(k)]));
    }
    layout->adjacency.push_back(static_cast<std::uint32_t>(i));
    for (int k = dim - 1; k >= 0; --k) {
      if (x[static_cast<std::size_t>(k)] < radius)
        layout->adjacency.push_back(static_cast<std::uint32_t>(i + stride[static_cast<std::size_t>(k)]));
    }
    // advance lexicographic odometer
    for (int k = dim - 1; k >= 0; --k) {
      auto& c = x[static_cast<std::size_t>(k)];
      if (c < radius) {
        ++c;
        break;
      }
      c = -radius;
    }
  }
  layout->offsets.push_back(layout->adjacency.size());

  std::size_t o = 0;
  for (int k = 0; k < dim; ++k) o += static_cast<std::size_t>(radius) * stride[static_cast<std::size_t>(k)];
  layout->origin = o;
  layout_ = std::move(layout);
}

bool Window::contains(const Point& x) const {
  return static_cast<int>(x.size()) == dim_ && sup_norm(x) <= radius_;
}

std::size_t Window::index(const Point& x) const {
  if (!contains(x)) throw RangeError("Window: point " + to_string(x) + " outside radius " + std::to_string(radius_));
  const std::size_t side = 2 * static_cast<std::size_t>(radius_) + 1;
  std::size_t idx = 0;
  for (int c : x) idx = idx * side + static_cast<std::size_t>(c + radius_);
  return idx;
}

Point Window::point(std::size_t index) const {
  if (index >= size()) throw RangeError("Window: index out of range");
  const std::size_t side = 2 * static_cast<std::size_t>(radius_) + 1;
  Point x(static_cast<std::size_t>(dim_));
  for (int k = dim_ - 1; k >= 0; --k) {
    x[static_cast<std::size_t>(k)] = static_cast<int>(index % side) - radius_;
    index /= side;
  }
  return x;
}

const Point& PathSegment::at(std::int64_t n) const {
  if (n < n1 || n > n2) throw RangeError("PathSegment: time outside [n1, n2]");
  return positions[static_cast<std::size_t>(n - n1)];
}

bool PathSegment::admissible() const {
  if (n2 < n1 || positions.size() != static_cast<std::size_t>(n2 - n1 + 1)) return false;
  for (std::size_t k = 1; k < positions.size(); ++k) {
    if (positions[k].size() != positions[0].size()) return false;
    if (l1_distance(positions[k - 1], positions[k]) > 1) return false;
  }
  return true;
}

void PathSegment::validate() const {
  if (n2 < n1) throw ValidationError("PathSegment: n2 < n1");
  if (positions.size() != static_cast<std::size_t>(n2 - n1 + 1))
    throw ValidationError("PathSegment: expected " + std::to_string(n2 - n1 + 1) + " positions");
  for (std::size_t k = 1; k < positions.size(); ++k) {
    if (positions[k].size() != positions[0].size() || l1_distance(positions[k - 1], positions[k]) > 1)
      throw ValidationError("PathSegment: non-lazy step at time " +
                            std::to_string(n1 + static_cast<std::int64_t>(k)));
  }
}

}  // namespace pinning
