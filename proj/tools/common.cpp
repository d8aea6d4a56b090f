#include "common.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nsm/synthetic.hpp"

namespace cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw std::invalid_argument(std::string(what) + ": malformed number '" + s + "'");
  return v;
}

}  // namespace

std::optional<nsm::DomainBox> ExperimentConfig::parse_box() const {
  if (box_spec.empty()) return std::nullopt;
  std::vector<double> lo, hi;
  for (const std::string& axis : split(box_spec, ',')) {
    const auto ends = split(axis, ':');
    if (ends.size() != 2)
      throw std::invalid_argument("box: each axis must be lo:hi, got '" + axis + "'");
    lo.push_back(parse_double(ends[0], "box"));
    hi.push_back(parse_double(ends[1], "box"));
  }
  return nsm::DomainBox(std::move(lo), std::move(hi));
}

std::shared_ptr<const nsm::Dataset> ExperimentConfig::build_dataset() const {
  const bool have_csv = !dataset_csv.empty();
  const bool have_synth = !synthetic_id.empty();
  if (have_csv == have_synth)
    throw std::invalid_argument(
        "exactly one dataset source required: --dataset <csv> or --synthetic <id>");
  if (have_csv)
    return std::make_shared<nsm::Dataset>(nsm::load_csv(dataset_csv, parse_box()));

  const auto& fn = nsm::synthetic_function(synthetic_id);
  const nsm::DomainBox box = parse_box().value_or(fn.default_box);
  return std::make_shared<nsm::Dataset>(
      nsm::sample_synthetic(synthetic_id, box, samples, seed));
}

nsm::LipschitzSchedule ExperimentConfig::schedule() const {
  if (lipschitz_spec.empty())
    throw std::invalid_argument("--lipschitz is required (list v1,v2,... or lo:hi:count)");
  if (lipschitz_spec.find(':') != std::string::npos) {
    const auto parts = split(lipschitz_spec, ':');
    if (parts.size() != 3)
      throw std::invalid_argument("lipschitz range must be lo:hi:count");
    const double lo = parse_double(parts[0], "lipschitz");
    const double hi = parse_double(parts[1], "lipschitz");
    const long count = std::stol(parts[2]);
    if (count <= 0) throw std::invalid_argument("lipschitz range count must be positive");
    return nsm::LipschitzSchedule::linspace(lo, hi, static_cast<std::size_t>(count));
  }
  std::vector<double> values;
  for (const std::string& v : split(lipschitz_spec, ','))
    values.push_back(parse_double(v, "lipschitz"));
  return nsm::LipschitzSchedule::from_values(std::move(values));
}

std::filesystem::path ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw std::invalid_argument("--out <dir> is required");
  const std::filesystem::path path(dir);
  std::filesystem::create_directories(path);
  return path;
}

void format17(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

namespace {

std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_point(std::ostream& out, std::span<const double> x) {
  for (double c : x) {
    format17(out, c);
    out << ",";
  }
}

}  // namespace

void write_surface_csv(const std::filesystem::path& path, const nsm::Grid& grid,
                       std::span<const double> values) {
  auto out = open_or_throw(path);
  for (std::size_t a = 0; a < grid.dimension(); ++a) out << "x_" << (a + 1) << ",";
  out << "value\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    write_point(out, grid.point(i));
    format17(out, values[i]);
    out << "\n";
  }
}

void write_regions_csv(const std::filesystem::path& path, const nsm::Grid& grid,
                       std::span<const nsm::RegionLabel> labels) {
  auto out = open_or_throw(path);
  for (std::size_t a = 0; a < grid.dimension(); ++a) out << "x_" << (a + 1) << ",";
  out << "kind,n,m,voronoi_index\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    write_point(out, grid.point(i));
    const nsm::RegionLabel& l = labels[i];
    out << (l.kind() == nsm::CellKind::B ? "B" : "A") << "," << (l.ceiling_index + 1)
        << "," << (l.floor_index + 1) << "," << (l.voronoi_index + 1) << "\n";
  }
}

}  // namespace cli
