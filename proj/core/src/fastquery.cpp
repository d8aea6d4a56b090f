#include "nsm/fastquery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

namespace nsm {

SpatialTree::SpatialTree(std::shared_ptr<const Dataset> data) : data_(std::move(data)) {}

std::shared_ptr<const SpatialTree> SpatialTree::build(std::shared_ptr<const Dataset> data) {
  if (!data) throw std::invalid_argument("SpatialTree::build: null dataset");
  auto tree = std::shared_ptr<SpatialTree>(new SpatialTree(std::move(data)));
  const std::size_t n = tree->data_->size();
  tree->order_.resize(n);
  std::iota(tree->order_.begin(), tree->order_.end(), 0u);
  tree->nodes_.reserve(2 * (n / kLeafCapacity + 1));
  tree->build_node(0, static_cast<std::uint32_t>(n));
  return tree;
}

std::int32_t SpatialTree::build_node(std::uint32_t begin, std::uint32_t end) {
  const std::size_t dim = data_->dimension();
  Node node;
  node.begin = begin;
  node.end = end;
  node.box_lo.assign(data_->x(order_[begin]).begin(), data_->x(order_[begin]).end());
  node.box_hi = node.box_lo;
  node.min_label = node.max_label = data_->y(order_[begin]);
  for (std::uint32_t k = begin + 1; k < end; ++k) {
    const auto pt = data_->x(order_[k]);
    for (std::size_t a = 0; a < dim; ++a) {
      node.box_lo[a] = std::min(node.box_lo[a], pt[a]);
      node.box_hi[a] = std::max(node.box_hi[a], pt[a]);
    }
    node.min_label = std::min(node.min_label, data_->y(order_[k]));
    node.max_label = std::max(node.max_label, data_->y(order_[k]));
  }

  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(std::move(node));

  if (end - begin > kLeafCapacity) {
    std::size_t axis = 0;
    double width = nodes_[id].box_hi[0] - nodes_[id].box_lo[0];
    for (std::size_t a = 1; a < dim; ++a) {
      const double w = nodes_[id].box_hi[a] - nodes_[id].box_lo[a];
      if (w > width) {
        width = w;
        axis = a;
      }
    }
    std::sort(order_.begin() + begin, order_.begin() + end,
              [&](std::uint32_t a, std::uint32_t b) {
                const double ca = data_->x(a)[axis];
                const double cb = data_->x(b)[axis];
                if (ca != cb) return ca < cb;
                return a < b;
              });
    const std::uint32_t mid = begin + (end - begin) / 2;
    const std::int32_t left = build_node(begin, mid);
    const std::int32_t right = build_node(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
  }
  return id;
}

BiasedIndex::BiasedIndex(std::shared_ptr<const SpatialTree> tree, QueryMode mode,
                         double lipschitz, Norm norm)
    : tree_(std::move(tree)), mode_(mode), lipschitz_(lipschitz), norm_(norm) {
  if (!tree_) throw std::invalid_argument("BiasedIndex: null tree");
  if (mode_ != QueryMode::plain && !(lipschitz_ > 0.0))
    throw std::invalid_argument("BiasedIndex: Lipschitz scale must be positive");
}

BiasedIndex BiasedIndex::build(std::shared_ptr<const Dataset> data, QueryMode mode,
                               double lipschitz, Norm norm) {
  return BiasedIndex(SpatialTree::build(std::move(data)), mode, lipschitz, norm);
}

double BiasedIndex::node_bound(const SpatialTree::Node& n, std::span<const double> x) const {
  // Point-to-box distance under the query norm; same accumulation pattern
  // as nsm::distance so the admissibility chain stays monotone in fp.
  double bd = 0.0;
  switch (norm_) {
    case Norm::l1:
      for (std::size_t a = 0; a < x.size(); ++a)
        bd += std::max({n.box_lo[a] - x[a], 0.0, x[a] - n.box_hi[a]});
      break;
    case Norm::l2: {
      for (std::size_t a = 0; a < x.size(); ++a) {
        const double g = std::max({n.box_lo[a] - x[a], 0.0, x[a] - n.box_hi[a]});
        bd += g * g;
      }
      bd = std::sqrt(bd);
      break;
    }
    case Norm::linf:
      for (std::size_t a = 0; a < x.size(); ++a)
        bd = std::max(bd, std::max({n.box_lo[a] - x[a], 0.0, x[a] - n.box_hi[a]}));
      break;
  }
  switch (mode_) {
    case QueryMode::ceiling: return n.min_label + lipschitz_ * bd;
    case QueryMode::floor: return lipschitz_ * bd - n.max_label;
    case QueryMode::plain: return bd;
  }
  return bd;
}

QueryResult BiasedIndex::query(std::span<const double> x, QueryStats* stats) const {
  const Dataset& d = tree_->data();
  if (x.size() != d.dimension())
    throw std::invalid_argument("BiasedIndex::query: dimension mismatch");

  // Minimized objective; floor maximization runs as min of L*dist - y,
  // whose negation equals y - L*dist bit for bit.
  const auto objective = [&](std::size_t j) {
    const double dist = distance(x, d.x(j), norm_);
    switch (mode_) {
      case QueryMode::ceiling: return d.y(j) + lipschitz_ * dist;
      case QueryMode::floor: return lipschitz_ * dist - d.y(j);
      case QueryMode::plain: return dist;
    }
    return dist;
  };

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  bool have_best = false;

  using Entry = std::pair<double, std::int32_t>;  // (bound, node id)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.emplace(node_bound(tree_->nodes()[0], x), 0);

  while (!heap.empty()) {
    const auto [bound, id] = heap.top();
    heap.pop();
    if (have_best && bound > best) {
      // Best-first pops bounds in non-decreasing order: everything left is
      // at least this far, and equal bounds were not pruned.
      if (stats) stats->min_pruned_bound = std::min(stats->min_pruned_bound, bound);
      break;
    }
    const SpatialTree::Node& node = tree_->nodes()[static_cast<std::size_t>(id)];
    if (stats) ++stats->visited_nodes;
    if (node.is_leaf()) {
      if (stats) {
        ++stats->visited_leaves;
        stats->scanned_points += node.end - node.begin;
      }
      for (std::uint32_t k = node.begin; k < node.end; ++k) {
        const std::size_t j = tree_->order()[k];
        const double v = objective(j);
        if (!have_best || v < best || (v == best && j < best_idx)) {
          best = v;
          best_idx = j;
          have_best = true;
        }
      }
    } else {
      for (std::int32_t child : {node.left, node.right}) {
        const double b = node_bound(tree_->nodes()[static_cast<std::size_t>(child)], x);
        if (have_best && b > best) {
          if (stats) stats->min_pruned_bound = std::min(stats->min_pruned_bound, b);
          continue;
        }
        heap.emplace(b, child);
      }
    }
  }

  return {best_idx, mode_ == QueryMode::floor ? -best : best};
}

PartitionIndex::PartitionIndex(std::shared_ptr<const Dataset> data, double lipschitz,
                               Norm norm)
    : PartitionIndex(SpatialTree::build(std::move(data)), lipschitz, norm) {}

PartitionIndex::PartitionIndex(std::shared_ptr<const SpatialTree> tree, double lipschitz,
                               Norm norm)
    : tree_(std::move(tree)),
      norm_(norm),
      ceiling_(tree_, QueryMode::ceiling, lipschitz, norm),
      floor_(tree_, QueryMode::floor, lipschitz, norm),
      plain_(tree_, QueryMode::plain, lipschitz, norm) {}

PartitionIndex::PointEval PartitionIndex::evaluate(std::span<const double> x) const {
  const QueryResult up = ceiling_.query(x);
  const QueryResult lo = floor_.query(x);
  const QueryResult nn = plain_.query(x);
  PointEval e;
  e.label = RegionLabel{up.index, lo.index, nn.index};
  e.ceiling_value = up.value;
  e.floor_value = lo.value;
  e.nn_distance = nn.value;
  return e;
}

double PartitionIndex::predict_from(const PointEval& e) const {
  if (e.label.ceiling_index == e.label.floor_index)
    return tree_->data().y(e.label.ceiling_index);
  return 0.5 * (e.ceiling_value + e.floor_value);
}

}  // namespace nsm
