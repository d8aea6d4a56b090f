#include "nsm/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace nsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_inside(const Dataset& d, std::span<const double> x, const char* who) {
  if (x.size() != d.dimension())
    throw std::invalid_argument(std::string(who) + ": query dimension mismatch");
  if (!d.box().contains(x))
    throw std::domain_error(std::string(who) + ": query point outside the domain box");
}

// One pass over the samples evaluating all three objectives on shared
// distances. Strict-improvement updates over ascending indices implement the
// lowest-index tie rule.
struct ScanResult {
  std::size_t ceil_idx = 0, floor_idx = 0, vor_idx = 0;
  double ceil_val = kInf, floor_val = -kInf, vor_dist = kInf;
};

ScanResult scan(const Dataset& d, double lipschitz, Norm p, std::span<const double> x) {
  ScanResult r;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double dist = distance(x, d.x(j), p);
    const double up = d.y(j) + lipschitz * dist;
    const double lo = d.y(j) - lipschitz * dist;
    if (up < r.ceil_val) {
      r.ceil_val = up;
      r.ceil_idx = j;
    }
    if (lo > r.floor_val) {
      r.floor_val = lo;
      r.floor_idx = j;
    }
    if (dist < r.vor_dist) {
      r.vor_dist = dist;
      r.vor_idx = j;
    }
  }
  return r;
}

}  // namespace

NnModel::NnModel(std::shared_ptr<const Dataset> data, Norm norm)
    : data_(std::move(data)), norm_(norm) {
  if (!data_) throw std::invalid_argument("NnModel: null dataset");
}

std::size_t NnModel::nearest(std::span<const double> x) const {
  require_inside(*data_, x, "NnModel::nearest");
  std::size_t best = 0;
  double best_dist = kInf;
  for (std::size_t j = 0; j < data_->size(); ++j) {
    const double dist = distance(x, data_->x(j), norm_);
    if (dist < best_dist) {
      best_dist = dist;
      best = j;
    }
  }
  return best;
}

double NnModel::predict(std::span<const double> x) const { return data_->y(nearest(x)); }

double NnModel::knn_predict(std::span<const double> x, std::size_t k) const {
  require_inside(*data_, x, "NnModel::knn_predict");
  if (k == 0 || k > data_->size())
    throw std::out_of_range("NnModel::knn_predict: k must be in [1, N]");
  std::vector<std::pair<double, std::size_t>> ranked(data_->size());
  for (std::size_t j = 0; j < data_->size(); ++j)
    ranked[j] = {distance(x, data_->x(j), norm_), j};
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k),
                    ranked.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += data_->y(ranked[i].second);
  return sum / static_cast<double>(k);
}

NsmModel::NsmModel(std::shared_ptr<const Dataset> data, double lipschitz, Norm norm)
    : data_(std::move(data)), lipschitz_(lipschitz), norm_(norm), lower_bound_(0.0) {
  if (!data_) throw std::invalid_argument("NsmModel: null dataset");
  if (!(lipschitz_ > 0.0))
    throw std::invalid_argument("NsmModel: Lipschitz estimate must be positive");
  if (data_->size() >= 2) lower_bound_ = lipschitz_lower_bound(*data_, norm_);
  if (lipschitz_ < lower_bound_)
    throw std::invalid_argument(
        "NsmModel: Lipschitz estimate " + std::to_string(lipschitz_) +
        " is below the data-implied lower bound " + std::to_string(lower_bound_) +
        "; the floor envelope would exceed the ceiling");
}

double NsmModel::ceiling(std::span<const double> x) const {
  require_inside(*data_, x, "NsmModel::ceiling");
  return scan(*data_, lipschitz_, norm_, x).ceil_val;
}

double NsmModel::floor(std::span<const double> x) const {
  require_inside(*data_, x, "NsmModel::floor");
  return scan(*data_, lipschitz_, norm_, x).floor_val;
}

double NsmModel::predict(std::span<const double> x) const {
  require_inside(*data_, x, "NsmModel::predict");
  const ScanResult r = scan(*data_, lipschitz_, norm_, x);
  if (r.ceil_idx == r.floor_idx) return data_->y(r.ceil_idx);
  return 0.5 * (r.ceil_val + r.floor_val);
}

RegionLabel NsmModel::classify(std::span<const double> x) const {
  require_inside(*data_, x, "NsmModel::classify");
  const ScanResult r = scan(*data_, lipschitz_, norm_, x);
  return RegionLabel{r.ceil_idx, r.floor_idx, r.vor_idx};
}

}  // namespace nsm
