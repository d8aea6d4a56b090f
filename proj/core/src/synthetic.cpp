#include "nsm/synthetic.hpp"

#include <cmath>
#include <stdexcept>

namespace nsm {

namespace {

std::vector<SyntheticFunction> build_registry() {
  std::vector<SyntheticFunction> fns;

  fns.push_back(SyntheticFunction{
      "cos_plus_sin",
      2,
      DomainBox({0.0, 0.0}, {10.0, 10.0}),
      [](std::span<const double> x) { return std::cos(x[0]) + std::sin(x[1]); },
      [](std::span<const double> x) {
        return std::vector<double>{-std::sin(x[0]), std::cos(x[1])};
      },
  });

  fns.push_back(SyntheticFunction{
      "sin_1d",
      1,
      DomainBox({0.0}, {10.0}),
      [](std::span<const double> x) { return std::sin(x[0]); },
      [](std::span<const double> x) { return std::vector<double>{std::cos(x[0])}; },
  });

  return fns;
}

const std::vector<SyntheticFunction>& registry() {
  static const std::vector<SyntheticFunction> fns = build_registry();
  return fns;
}

}  // namespace

const SyntheticFunction& synthetic_function(std::string_view id) {
  for (const auto& fn : registry())
    if (fn.id == id) return fn;
  std::string known;
  for (const auto& fn : registry()) known += (known.empty() ? "" : ", ") + fn.id;
  throw std::invalid_argument("unknown synthetic function '" + std::string(id) +
                              "' (known: " + known + ")");
}

std::vector<std::string> synthetic_ids() {
  std::vector<std::string> ids;
  for (const auto& fn : registry()) ids.push_back(fn.id);
  return ids;
}

Dataset sample_synthetic(std::string_view id, const DomainBox& box, std::size_t n,
                         std::uint64_t seed) {
  const SyntheticFunction& fn = synthetic_function(id);
  if (box.dimension() != fn.dimension)
    throw std::invalid_argument("sample_synthetic: box dimension " +
                                std::to_string(box.dimension()) + " does not match " +
                                fn.id + " (expects " + std::to_string(fn.dimension) + ")");
  if (n == 0) throw std::invalid_argument("sample_synthetic: n must be positive");

  UniformSampler rng(seed);
  std::vector<Sample> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i].x.resize(fn.dimension);
    for (std::size_t a = 0; a < fn.dimension; ++a)
      samples[i].x[a] = rng.in(box.lower()[a], box.upper()[a]);
    samples[i].y = fn.value(samples[i].x);
  }
  return Dataset(std::move(samples), box);
}

double grid_lipschitz_estimate(const SyntheticFunction& fn, const DomainBox& box,
                               std::size_t points_per_axis, Norm p) {
  if (box.dimension() != fn.dimension)
    throw std::invalid_argument("grid_lipschitz_estimate: box dimension mismatch");
  const Norm dual = p == Norm::l2 ? Norm::l2 : (p == Norm::l1 ? Norm::linf : Norm::l1);
  const Grid grid = make_grid(box, GridSpec{points_per_axis});
  double best = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto g = fn.gradient(grid.point(i));
    best = std::max(best, vector_norm(g, dual));
  }
  return best;
}

}  // namespace nsm
