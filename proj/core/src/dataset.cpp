#include "nsm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nsm {

namespace {

// Lexicographic feature order with the label and original index as final
// tiebreakers; groups equal-feature samples together deterministically.
bool sample_less(const Sample& a, const Sample& b, std::size_t ia, std::size_t ib) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return ia < ib;
}

void check_finite(const Sample& s, std::size_t i) {
  for (double c : s.x)
    if (!std::isfinite(c))
      throw std::invalid_argument("Dataset: non-finite feature in sample " +
                                  std::to_string(i + 1));
  if (!std::isfinite(s.y))
    throw std::invalid_argument("Dataset: non-finite label in sample " +
                                std::to_string(i + 1));
}

void format17(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

Dataset::Dataset(std::vector<Sample> samples, DomainBox box)
    : samples_(std::move(samples)), box_(std::move(box)) {
  if (samples_.empty()) throw std::invalid_argument("Dataset: needs at least one sample");
  const std::size_t dim = box_.dimension();
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].x.size() != dim)
      throw std::invalid_argument("Dataset: sample " + std::to_string(i + 1) +
                                  " has dimension " + std::to_string(samples_[i].x.size()) +
                                  ", expected " + std::to_string(dim));
    check_finite(samples_[i], i);
    if (!box_.contains(x(i)))
      throw std::invalid_argument("Dataset: sample " + std::to_string(i + 1) +
                                  " lies outside the domain box");
  }

  // Drop exact duplicates, keeping the first occurrence.
  std::vector<std::size_t> order(samples_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sample_less(samples_[a], samples_[b], a, b);
  });
  std::vector<bool> drop(samples_.size(), false);
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Sample& prev = samples_[order[k - 1]];
    const Sample& cur = samples_[order[k]];
    if (prev.x == cur.x && prev.y == cur.y) drop[std::max(order[k], order[k - 1])] = true;
  }
  if (std::find(drop.begin(), drop.end(), true) != drop.end()) {
    std::vector<Sample> kept;
    kept.reserve(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i)
      if (!drop[i]) kept.push_back(std::move(samples_[i]));
    samples_ = std::move(kept);
  }
}

Dataset Dataset::from_samples(std::vector<Sample> samples, std::optional<DomainBox> box) {
  if (box) return Dataset(std::move(samples), std::move(*box));
  if (samples.empty()) throw std::invalid_argument("Dataset: needs at least one sample");
  const std::size_t dim = samples.front().x.size();
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (const Sample& s : samples) {
    if (s.x.size() != dim)
      throw std::invalid_argument("Dataset: inconsistent sample dimensions");
    for (std::size_t a = 0; a < dim; ++a) {
      lo[a] = std::min(lo[a], s.x[a]);
      hi[a] = std::max(hi[a], s.x[a]);
    }
  }
  for (std::size_t a = 0; a < dim; ++a)
    if (!(lo[a] < hi[a]))
      throw std::invalid_argument(
          "Dataset: cannot infer a box, samples are degenerate along axis " +
          std::to_string(a + 1) + "; declare a box explicitly");
  return Dataset(std::move(samples), DomainBox(std::move(lo), std::move(hi)));
}

double Dataset::max_abs_label() const {
  double m = 0.0;
  for (const Sample& s : samples_) m = std::max(m, std::abs(s.y));
  return m;
}

AssumptionReport validate(std::span<const Sample> samples) {
  AssumptionReport rep;
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].y != samples[0].y) {
      rep.has_distinct_labels = true;
      break;
    }

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sample_less(samples[a], samples[b], a, b);
  });
  // Equal-feature runs; report every conflicting pair inside a run.
  for (std::size_t k = 0; k < order.size();) {
    std::size_t e = k + 1;
    while (e < order.size() && samples[order[e]].x == samples[order[k]].x) ++e;
    for (std::size_t i = k; i < e; ++i)
      for (std::size_t j = i + 1; j < e; ++j)
        if (samples[order[i]].y != samples[order[j]].y) {
          auto a = std::minmax(order[i], order[j]);
          rep.duplicate_feature_conflicts.push_back(a);
        }
    k = e;
  }
  std::sort(rep.duplicate_feature_conflicts.begin(), rep.duplicate_feature_conflicts.end());
  return rep;
}

AssumptionReport validate(const Dataset& d) {
  return validate(std::span<const Sample>(d.samples()));
}

double lipschitz_lower_bound(const Dataset& d, Norm p) {
  if (d.size() < 2)
    throw std::invalid_argument("lipschitz_lower_bound: needs at least two samples");
  double best = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const double dy = std::abs(d.y(i) - d.y(j));
      const double dx = distance(d.x(i), d.x(j), p);
      if (dx == 0.0) {
        if (dy == 0.0) continue;  // exact duplicates are dropped at construction
        throw std::invalid_argument(
            "lipschitz_lower_bound: samples " + std::to_string(i + 1) + " and " +
            std::to_string(j + 1) + " share features but not labels (infinite slope)");
      }
      best = std::max(best, dy / dx);
    }
  return best;
}

Dataset load_csv(const std::filesystem::path& path, std::optional<DomainBox> declared_box) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path.string());

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    cells.push_back(cur);
    return cells;
  };

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("load_csv: " + path.string() + " is empty");
  const auto header = split(line);
  if (header.size() < 2 || header.back() != "y")
    throw std::runtime_error("load_csv: expected header x_1,...,x_d,y");
  const std::size_t dim = header.size() - 1;
  for (std::size_t a = 0; a < dim; ++a)
    if (header[a] != "x_" + std::to_string(a + 1))
      throw std::runtime_error("load_csv: column " + std::to_string(a + 1) +
                               " must be named x_" + std::to_string(a + 1));

  std::vector<Sample> samples;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != dim + 1)
      throw std::runtime_error("load_csv: line " + std::to_string(lineno) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(dim + 1));
    Sample s;
    s.x.resize(dim);
    for (std::size_t c = 0; c <= dim; ++c) {
      double v;
      std::size_t used = 0;
      try {
        v = std::stod(cells[c], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cells[c].size() || cells[c].empty())
        throw std::runtime_error("load_csv: malformed number '" + cells[c] +
                                 "' at line " + std::to_string(lineno));
      if (c < dim)
        s.x[c] = v;
      else
        s.y = v;
    }
    samples.push_back(std::move(s));
  }
  if (declared_box) {
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (!declared_box->contains(samples[i].x))
        throw std::runtime_error("load_csv: sample at data row " + std::to_string(i + 1) +
                                 " lies outside the declared box");
  }
  return Dataset::from_samples(std::move(samples), std::move(declared_box));
}

void write_csv(const Dataset& d, std::ostream& out) {
  for (std::size_t a = 0; a < d.dimension(); ++a) out << "x_" << (a + 1) << ",";
  out << "y\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (double c : d.x(i)) {
      format17(out, c);
      out << ",";
    }
    format17(out, d.y(i));
    out << "\n";
  }
}

void write_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
  write_csv(d, out);
}

}  // namespace nsm
