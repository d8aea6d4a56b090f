#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsm/analysis.hpp"
#include "nsm/dataset.hpp"
#include "nsm/geometry.hpp"
#include "nsm/regressors.hpp"

namespace cli {

/// Seed of the built-in experiment preset. Sampling uses mt19937_64 with
/// top-53-bit unit doubles (see nsm::UniformSampler), so the preset dataset
/// is identical across builds and platforms.
inline constexpr std::uint64_t kDefaultSeed = 7;

struct ExperimentConfig {
  std::string dataset_csv;
  std::string synthetic_id;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 30;
  std::string box_spec;       // "lo:hi,lo:hi,..." one pair per axis
  std::string norm_str = "2";
  std::string lipschitz_spec; // "2,4,16" or "lo:hi:count"
  std::size_t grid = 200;
  std::string out_dir;
  bool normalize = false;

  nsm::Norm norm() const { return nsm::norm_from_string(norm_str); }
  std::optional<nsm::DomainBox> parse_box() const;

  /// Builds from exactly one declared source (CSV path or synthetic id).
  std::shared_ptr<const nsm::Dataset> build_dataset() const;

  nsm::LipschitzSchedule schedule() const;
  bool has_schedule() const { return !lipschitz_spec.empty(); }
};

std::filesystem::path ensure_out_dir(const std::string& dir);

void format17(std::ostream& out, double v);

void write_surface_csv(const std::filesystem::path& path, const nsm::Grid& grid,
                       std::span<const double> values);

/// Columns x_1..x_d,kind,n,m,voronoi_index with 1-based sample numbers, the
/// numbering of the data file.
void write_regions_csv(const std::filesystem::path& path, const nsm::Grid& grid,
                       std::span<const nsm::RegionLabel> labels);

}  // namespace cli
