#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "nsm/dataset.hpp"
#include "nsm/geometry.hpp"

namespace nsm {

/// B: the ceiling and floor envelopes are supported by the same sample, and
/// the regressor equals that sample's label. A: distinct supports, the
/// transition region between plateaus.
enum class CellKind { A, B };

/// Where a point falls in the three partitions: the ceiling diagram, the
/// floor diagram, and the plain Voronoi diagram. Indices are 0-based sample
/// positions. All ties are broken toward the lowest index.
struct RegionLabel {
  std::size_t ceiling_index = 0;
  std::size_t floor_index = 0;
  std::size_t voronoi_index = 0;

  CellKind kind() const { return ceiling_index == floor_index ? CellKind::B : CellKind::A; }

  bool operator==(const RegionLabel&) const = default;
};

/// Nearest-neighbor and k-NN regression under a fixed norm.
/// Tie rule: lowest sample index wins, making every query deterministic.
class NnModel {
 public:
  NnModel(std::shared_ptr<const Dataset> data, Norm norm);

  const Dataset& data() const { return *data_; }
  std::shared_ptr<const Dataset> data_ptr() const { return data_; }
  Norm norm() const { return norm_; }

  /// Index of the nearest sample.
  std::size_t nearest(std::span<const double> x) const;

  /// Label of the nearest sample (k-NN with k = 1).
  double predict(std::span<const double> x) const;

  /// Unweighted mean of the k nearest labels; neighbors ranked by
  /// (distance, index) so ties complete toward lower indices.
  double knn_predict(std::span<const double> x, std::size_t k) const;

 private:
  std::shared_ptr<const Dataset> data_;
  Norm norm_;
};

/// Set-membership regressor: midpoint of the tightest upper and lower
/// envelopes consistent with the data and a Lipschitz estimate.
///
/// Construction rejects estimates below the data-implied lower bound, since
/// those would let the floor exceed the ceiling somewhere.
class NsmModel {
 public:
  NsmModel(std::shared_ptr<const Dataset> data, double lipschitz, Norm norm);

  const Dataset& data() const { return *data_; }
  std::shared_ptr<const Dataset> data_ptr() const { return data_; }
  double lipschitz() const { return lipschitz_; }
  Norm norm() const { return norm_; }
  double data_lower_bound() const { return lower_bound_; }

  /// min_n y_n + L ||x - x_n||: tightest consistent upper envelope.
  double ceiling(std::span<const double> x) const;

  /// max_n y_n - L ||x - x_n||: tightest consistent lower envelope.
  double floor(std::span<const double> x) const;

  /// Midpoint of ceiling and floor. On B cells this is computed as the
  /// supporting label itself, which the midpoint equals identically, so
  /// agreement regions and sample interpolation are exact in floating point.
  double predict(std::span<const double> x) const;

  /// Supporting sample of each envelope plus the Voronoi cell. All three
  /// argmins share one distance evaluation per sample, so the labels are
  /// mutually consistent even at near-ties.
  RegionLabel classify(std::span<const double> x) const;

 private:
  std::shared_ptr<const Dataset> data_;
  double lipschitz_;
  Norm norm_;
  double lower_bound_;
};

}  // namespace nsm
