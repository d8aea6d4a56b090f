#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsm/dataset.hpp"
#include "nsm/geometry.hpp"

namespace nsm {

/// Deterministic uniform draws. mt19937_64 is seeded directly with the user
/// seed; unit doubles take the top 53 bits, (word >> 11) * 2^-53, so the
/// stream does not depend on the standard library's distribution
/// implementations and is stable across toolchains.
class UniformSampler {
 public:
  explicit UniformSampler(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t raw() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

/// Ground-truth function with analytic gradient, usable both for sampling
/// and for estimating its best Lipschitz constant on a grid.
struct SyntheticFunction {
  std::string id;
  std::size_t dimension;
  DomainBox default_box;
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
};

const SyntheticFunction& synthetic_function(std::string_view id);
std::vector<std::string> synthetic_ids();

/// N samples with coordinates uniform over the box (axis by axis, sample by
/// sample) and labels from the registry function. Throws on n = 0, unknown
/// id, or box dimension mismatch.
Dataset sample_synthetic(std::string_view id, const DomainBox& box, std::size_t n,
                         std::uint64_t seed);

/// Best-constant estimate: the maximum over grid midpoints of the dual-norm
/// length of the gradient (l2 is self-dual; l1 pairs with linf and vice
/// versa). A lower bound of the true constant on convex domains.
double grid_lipschitz_estimate(const SyntheticFunction& fn, const DomainBox& box,
                               std::size_t points_per_axis, Norm p);

}  // namespace nsm
