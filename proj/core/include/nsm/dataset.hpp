#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nsm/geometry.hpp"

namespace nsm {

struct Sample {
  std::vector<double> x;
  double y = 0.0;
};

/// Status of the distinct-labels assumption plus any feature duplicates that
/// carry contradicting labels (index pairs are 0-based, first < second).
struct AssumptionReport {
  bool has_distinct_labels = false;
  std::vector<std::pair<std::size_t, std::size_t>> duplicate_feature_conflicts;
};

/// Immutable collection of labeled samples inside a domain box.
///
/// Construction checks structure (consistent dimension, in-box, finite
/// values) and silently drops exact duplicate samples: they carry no
/// information and would produce zero-distance pairs in the slope bound.
/// Samples with identical features but different labels are kept so that
/// validate() can report them; operations that require noiseless data
/// (lipschitz_lower_bound, model construction) reject such datasets.
///
/// Sample order is stable; the 0-based position is the identity used by
/// every region label and query result.
class Dataset {
 public:
  Dataset(std::vector<Sample> samples, DomainBox box);

  /// Box inferred as the tight bounding box of the samples when absent.
  static Dataset from_samples(std::vector<Sample> samples,
                              std::optional<DomainBox> box = std::nullopt);

  std::size_t size() const { return samples_.size(); }
  std::size_t dimension() const { return box_.dimension(); }
  const DomainBox& box() const { return box_; }

  std::span<const double> x(std::size_t i) const {
    return {samples_[i].x.data(), samples_[i].x.size()};
  }
  double y(std::size_t i) const { return samples_[i].y; }
  const std::vector<Sample>& samples() const { return samples_; }

  double max_abs_label() const;

 private:
  std::vector<Sample> samples_;
  DomainBox box_;
};

AssumptionReport validate(std::span<const Sample> samples);
AssumptionReport validate(const Dataset& d);

/// Largest pairwise slope max_{i != j} |y_i - y_j| / ||x_i - x_j||: the
/// tightest Lipschitz bound certifiable from the data alone. Any constant
/// valid for the generating function is at least this value.
/// Throws on fewer than two samples or on duplicate features with distinct
/// labels (infinite slope).
double lipschitz_lower_bound(const Dataset& d, Norm p);

/// CSV with header x_1,...,x_d,y; one sample per line. When a box is
/// declared, samples outside it are an error; otherwise the box is the
/// tight bounding box of the data.
Dataset load_csv(const std::filesystem::path& path,
                 std::optional<DomainBox> declared_box = std::nullopt);

/// Values are written with 17 significant digits, so a reload reproduces
/// the dataset exactly.
void write_csv(const Dataset& d, std::ostream& out);
void write_csv(const Dataset& d, const std::filesystem::path& path);

}  // namespace nsm
