#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nsm {

/// Finite-dimensional norm choice. Every distance in the library is taken
/// under one of these three orders.
enum class Norm { l1, l2, linf };

Norm norm_from_string(std::string_view s);  // accepts "1", "2", "inf"
std::string_view to_string(Norm p);

/// lp norm of a vector. Sums run in index order so results are reproducible.
/// Throws std::invalid_argument on an empty vector.
double vector_norm(std::span<const double> v, Norm p);

/// Distance ||a - b|| without materializing the difference vector.
/// Bit-identical to vector_norm(a - b, p).
double distance(std::span<const double> a, std::span<const double> b, Norm p);

/// Axis-aligned box with nonempty interior; the domain X of every model.
class DomainBox {
 public:
  DomainBox(std::vector<double> lower, std::vector<double> upper);

  std::size_t dimension() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double volume() const;

  /// Closed membership test.
  bool contains(std::span<const double> x) const;

  /// Distance from x to the box (0 when x is inside), under the norm.
  /// For each lp this is the norm of the per-coordinate overshoot vector.
  double distance_to(std::span<const double> x, Norm p) const;

  bool operator==(const DomainBox&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

struct GridSpec {
  std::size_t points_per_axis = 0;
};

/// Midpoints of a uniform cell decomposition of a box, row-major (last axis
/// fastest). Every point is strictly interior; all cells share one volume.
class Grid {
 public:
  std::size_t size() const { return size_; }
  std::size_t dimension() const { return box_.dimension(); }
  double cell_volume() const { return cell_volume_; }
  const DomainBox& box() const { return box_; }
  const GridSpec& spec() const { return spec_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dimension(), dimension()};
  }

  friend Grid make_grid(const DomainBox& box, GridSpec spec);

 private:
  Grid(DomainBox box, GridSpec spec);

  DomainBox box_;
  GridSpec spec_;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
  std::vector<double> coords_;  // flat, size * dimension
};

Grid make_grid(const DomainBox& box, GridSpec spec);

}  // namespace nsm
