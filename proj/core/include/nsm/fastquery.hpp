#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "nsm/dataset.hpp"
#include "nsm/geometry.hpp"
#include "nsm/regressors.hpp"

namespace nsm {

/// Balanced median-split tree over the sample points. Norm- and
/// bias-independent, so one tree serves every query mode and every
/// Lipschitz value on the same dataset.
///
/// Splits run along the widest axis of the node's tight bounding box with a
/// total (coordinate, index) order, so rebuilding from the same dataset
/// reproduces the structure exactly.
class SpatialTree {
 public:
  static constexpr std::size_t kLeafCapacity = 8;

  struct Node {
    std::vector<double> box_lo, box_hi;  // tight bounds of contained points
    double min_label = 0.0, max_label = 0.0;
    std::uint32_t begin = 0, end = 0;  // range into order()
    std::int32_t left = -1, right = -1;
    bool is_leaf() const { return left < 0; }
  };

  static std::shared_ptr<const SpatialTree> build(std::shared_ptr<const Dataset> data);

  const Dataset& data() const { return *data_; }
  std::shared_ptr<const Dataset> data_ptr() const { return data_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  /// Permutation of 0..N-1; leaves own disjoint ranges covering all of it.
  const std::vector<std::uint32_t>& order() const { return order_; }

 private:
  explicit SpatialTree(std::shared_ptr<const Dataset> data);
  std::int32_t build_node(std::uint32_t begin, std::uint32_t end);

  std::shared_ptr<const Dataset> data_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
};

enum class QueryMode { ceiling, floor, plain };

struct QueryResult {
  std::size_t index = 0;
  double value = 0.0;  // envelope value (ceiling/floor) or distance (plain)
};

struct QueryStats {
  std::size_t visited_nodes = 0;
  std::size_t visited_leaves = 0;
  std::size_t scanned_points = 0;
  double min_pruned_bound = std::numeric_limits<double>::infinity();
};

/// Exact best-first branch-and-bound for the biased nearest-point problems:
/// argmin y_n + L||x-x_n|| (ceiling), argmax y_n - L||x-x_n|| (floor), and
/// the plain nearest neighbor.
///
/// Results are identical to the linear scan, ties included: leaf objectives
/// reuse the scan's arithmetic, node bounds are admissible in floating
/// point (every step of min_label + L*boxdist is monotone), and only
/// strictly worse bounds are pruned, so an equal-valued lower index can
/// never be cut off.
class BiasedIndex {
 public:
  BiasedIndex(std::shared_ptr<const SpatialTree> tree, QueryMode mode, double lipschitz,
              Norm norm);

  /// Convenience: builds a fresh tree for the dataset.
  static BiasedIndex build(std::shared_ptr<const Dataset> data, QueryMode mode,
                           double lipschitz, Norm norm);

  QueryResult query(std::span<const double> x, QueryStats* stats = nullptr) const;

  /// Same spatial tree, new bias scale.
  BiasedIndex with_lipschitz(double lipschitz) const {
    return BiasedIndex(tree_, mode_, lipschitz, norm_);
  }

  const SpatialTree& tree() const { return *tree_; }
  QueryMode mode() const { return mode_; }
  double lipschitz() const { return lipschitz_; }
  Norm norm() const { return norm_; }

 private:
  double node_bound(const SpatialTree::Node& n, std::span<const double> x) const;

  std::shared_ptr<const SpatialTree> tree_;
  QueryMode mode_;
  double lipschitz_;
  Norm norm_;
};

/// Ceiling, floor and plain indices over one shared tree; the accelerated
/// counterpart of NsmModel::classify / predict with bitwise-equal results.
class PartitionIndex {
 public:
  PartitionIndex(std::shared_ptr<const Dataset> data, double lipschitz, Norm norm);
  PartitionIndex(std::shared_ptr<const SpatialTree> tree, double lipschitz, Norm norm);

  struct PointEval {
    RegionLabel label;
    double ceiling_value = 0.0;
    double floor_value = 0.0;
    double nn_distance = 0.0;
  };

  PointEval evaluate(std::span<const double> x) const;
  RegionLabel classify(std::span<const double> x) const { return evaluate(x).label; }
  std::size_t nearest(std::span<const double> x) const { return plain_.query(x).index; }

  /// Regressor value from an evaluation (label on B cells, envelope
  /// midpoint on A cells).
  double predict_from(const PointEval& e) const;
  double predict(std::span<const double> x) const { return predict_from(evaluate(x)); }

  PartitionIndex with_lipschitz(double lipschitz) const {
    return PartitionIndex(tree_, lipschitz, norm_);
  }

  const SpatialTree& tree() const { return *tree_; }
  const Dataset& data() const { return tree_->data(); }
  double lipschitz() const { return ceiling_.lipschitz(); }
  Norm norm() const { return norm_; }

 private:
  std::shared_ptr<const SpatialTree> tree_;
  Norm norm_;
  BiasedIndex ceiling_;
  BiasedIndex floor_;
  BiasedIndex plain_;
};

}  // namespace nsm
