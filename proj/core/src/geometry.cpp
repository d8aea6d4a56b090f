#include "nsm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsm {

Norm norm_from_string(std::string_view s) {
  if (s == "1") return Norm::l1;
  if (s == "2") return Norm::l2;
  if (s == "inf") return Norm::linf;
  throw std::invalid_argument("unknown norm '" + std::string(s) +
                              "' (expected 1, 2 or inf)");
}

std::string_view to_string(Norm p) {
  switch (p) {
    case Norm::l1: return "1";
    case Norm::l2: return "2";
    case Norm::linf: return "inf";
  }
  return "?";
}

double vector_norm(std::span<const double> v, Norm p) {
  if (v.empty()) throw std::invalid_argument("vector_norm: empty vector");
  double acc = 0.0;
  switch (p) {
    case Norm::l1:
      for (double c : v) acc += std::abs(c);
      return acc;
    case Norm::l2:
      for (double c : v) acc += c * c;
      return std::sqrt(acc);
    case Norm::linf:
      for (double c : v) acc = std::max(acc, std::abs(c));
      return acc;
  }
  return acc;
}

double distance(std::span<const double> a, std::span<const double> b, Norm p) {
  if (a.size() != b.size())
    throw std::invalid_argument("distance: dimension mismatch");
  if (a.empty()) throw std::invalid_argument("distance: empty vector");
  double acc = 0.0;
  switch (p) {
    case Norm::l1:
      for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
      return acc;
    case Norm::l2:
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
      }
      return std::sqrt(acc);
    case Norm::linf:
      for (std::size_t i = 0; i < a.size(); ++i)
        acc = std::max(acc, std::abs(a[i] - b[i]));
      return acc;
  }
  return acc;
}

DomainBox::DomainBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size())
    throw std::invalid_argument("DomainBox: bounds must be nonempty and equal-sized");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i]))
      throw std::invalid_argument("DomainBox: lower[" + std::to_string(i) +
                                  "] must be strictly below upper");
  }
}

double DomainBox::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) v *= upper_[i] - lower_[i];
  return v;
}

bool DomainBox::contains(std::span<const double> x) const {
  if (x.size() != dimension()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
  return true;
}

double DomainBox::distance_to(std::span<const double> x, Norm p) const {
  if (x.size() != dimension())
    throw std::invalid_argument("DomainBox::distance_to: dimension mismatch");
  double acc = 0.0;
  switch (p) {
    case Norm::l1:
      for (std::size_t i = 0; i < x.size(); ++i)
        acc += std::max({lower_[i] - x[i], 0.0, x[i] - upper_[i]});
      return acc;
    case Norm::l2:
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double g = std::max({lower_[i] - x[i], 0.0, x[i] - upper_[i]});
        acc += g * g;
      }
      return std::sqrt(acc);
    case Norm::linf:
      for (std::size_t i = 0; i < x.size(); ++i)
        acc = std::max(acc, std::max({lower_[i] - x[i], 0.0, x[i] - upper_[i]}));
      return acc;
  }
  return acc;
}

Grid::Grid(DomainBox box, GridSpec spec) : box_(std::move(box)), spec_(spec) {}

Grid make_grid(const DomainBox& box, GridSpec spec) {
  const std::size_t n = spec.points_per_axis;
  if (n == 0) throw std::invalid_argument("make_grid: points_per_axis must be positive");
  const std::size_t dim = box.dimension();

  std::size_t total = 1;
  for (std::size_t a = 0; a < dim; ++a) {
    if (total > (std::size_t{1} << 31) / n)
      throw std::invalid_argument("make_grid: grid would exceed 2^31 points");
    total *= n;
  }

  Grid g(box, spec);
  g.size_ = total;

  double vol = 1.0;
  std::vector<double> axis(dim * n);  // per-axis midpoint coordinates
  for (std::size_t a = 0; a < dim; ++a) {
    const double step = (box.upper()[a] - box.lower()[a]) / static_cast<double>(n);
    vol *= step;
    for (std::size_t k = 0; k < n; ++k)
      axis[a * n + k] = box.lower()[a] + (static_cast<double>(k) + 0.5) * step;
  }
  g.cell_volume_ = vol;

  g.coords_.resize(total * dim);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    for (std::size_t a = dim; a-- > 0;) {  // last axis fastest
      g.coords_[i * dim + a] = axis[a * n + rem % n];
      rem /= n;
    }
  }
  return g;
}

}  // namespace nsm
