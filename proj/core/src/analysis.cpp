#include "nsm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nsm/fastquery.hpp"

namespace nsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInteriorGapMargin = 1e-9;

void format17(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

void require_same_models(const NsmModel& nsm, const NnModel& nn, const char* who) {
  if (nsm.data_ptr() != nn.data_ptr() || nsm.norm() != nn.norm())
    throw std::invalid_argument(std::string(who) +
                                ": models must share the dataset instance and the norm");
}

void require_same_box(const Grid& grid, const NsmModel& nsm, const char* who) {
  if (grid.box() != nsm.data().box())
    throw std::invalid_argument(std::string(who) + ": grid box does not match the domain");
}

double predict_from_label(const Dataset& d, const RegionLabel& label, double ceil_val,
                          double floor_val) {
  if (label.ceiling_index == label.floor_index) return d.y(label.ceiling_index);
  return 0.5 * (ceil_val + floor_val);
}

// Best and runner-up of the three objectives in one pass; gaps qualify
// interior membership for the local monotonicity rules.
struct RichEval {
  RegionLabel label;
  double ceil_val = kInf, floor_val = -kInf, vor_dist = kInf;
  double ceil_gap = kInf, floor_gap = kInf, vor_gap = kInf;
};

RichEval rich_scan(const Dataset& d, double lipschitz, Norm p, std::span<const double> x) {
  RichEval r;
  double ceil2 = kInf, floor2 = -kInf, vor2 = kInf;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double dist = distance(x, d.x(j), p);
    const double up = d.y(j) + lipschitz * dist;
    const double lo = d.y(j) - lipschitz * dist;
    if (up < r.ceil_val) {
      ceil2 = r.ceil_val;
      r.ceil_val = up;
      r.label.ceiling_index = j;
    } else {
      ceil2 = std::min(ceil2, up);
    }
    if (lo > r.floor_val) {
      floor2 = r.floor_val;
      r.floor_val = lo;
      r.label.floor_index = j;
    } else {
      floor2 = std::max(floor2, lo);
    }
    if (dist < r.vor_dist) {
      vor2 = r.vor_dist;
      r.vor_dist = dist;
      r.label.voronoi_index = j;
    } else {
      vor2 = std::min(vor2, dist);
    }
  }
  r.ceil_gap = ceil2 - r.ceil_val;
  r.floor_gap = r.floor_val - floor2;
  r.vor_gap = vor2 - r.vor_dist;
  return r;
}

}  // namespace

LipschitzSchedule LipschitzSchedule::from_values(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("LipschitzSchedule: needs at least one value");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] <= 0.0)
      throw std::invalid_argument("LipschitzSchedule: values must be positive and finite");
    if (i > 0 && values[i] <= values[i - 1])
      throw std::invalid_argument("LipschitzSchedule: values must be strictly increasing");
  }
  return LipschitzSchedule(std::move(values));
}

LipschitzSchedule LipschitzSchedule::linspace(double lo, double hi, std::size_t count) {
  if (count == 0) throw std::invalid_argument("LipschitzSchedule: count must be positive");
  if (count == 1) return from_values({lo});
  if (!(hi > lo))
    throw std::invalid_argument("LipschitzSchedule: range must be increasing");
  std::vector<double> values(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k)
    values[k] = lo + static_cast<double>(k) * step;
  return from_values(std::move(values));
}

ErrorBoundConstants error_bounds(const Dataset& d) {
  const double m = d.max_abs_label();
  return {m, m, m + m};
}

double error_at(const NsmModel& nsm, const NnModel& nn, std::span<const double> x) {
  require_same_models(nsm, nn, "error_at");
  return nn.predict(x) - nsm.predict(x);
}

double error_closed_form(const NsmModel& nsm, const NnModel& nn, std::span<const double> x) {
  require_same_models(nsm, nn, "error_closed_form");
  const RegionLabel label = nsm.classify(x);
  if (label.kind() == CellKind::B) return 0.0;
  const Dataset& d = nsm.data();
  const double dn = distance(x, d.x(label.ceiling_index), nsm.norm());
  const double dm = distance(x, d.x(label.floor_index), nsm.norm());
  return d.y(label.voronoi_index) -
         0.5 * (d.y(label.ceiling_index) + d.y(label.floor_index)) -
         0.5 * nsm.lipschitz() * (dn - dm);
}

double l2_error(const NsmModel& nsm, const NnModel& nn, const Grid& grid) {
  require_same_models(nsm, nn, "l2_error");
  require_same_box(grid, nsm, "l2_error");
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = nn.predict(grid.point(i)) - nsm.predict(grid.point(i));
    sum += e * e;
  }
  return std::sqrt(sum * grid.cell_volume());
}

double l2_error(const NsmModel& nsm, const NnModel& nn, GridSpec spec) {
  return l2_error(nsm, nn, make_grid(nsm.data().box(), spec));
}

double sup_error(const NsmModel& nsm, const NnModel& nn, const Grid& grid) {
  require_same_models(nsm, nn, "sup_error");
  require_same_box(grid, nsm, "sup_error");
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    sup = std::max(sup, std::abs(nn.predict(grid.point(i)) - nsm.predict(grid.point(i))));
  return sup;
}

double sup_error(const NsmModel& nsm, const NnModel& nn, GridSpec spec) {
  return sup_error(nsm, nn, make_grid(nsm.data().box(), spec));
}

TransitionMass transition_mass(const NsmModel& nsm, const Grid& grid) {
  require_same_box(grid, nsm, "transition_mass");
  std::size_t a_count = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (nsm.classify(grid.point(i)).kind() == CellKind::A) ++a_count;
  const std::size_t b_count = grid.size() - a_count;
  return {static_cast<double>(a_count) * grid.cell_volume(),
          static_cast<double>(b_count) * grid.cell_volume()};
}

TransitionMass transition_mass(const NsmModel& nsm, GridSpec spec) {
  return transition_mass(nsm, make_grid(nsm.data().box(), spec));
}

double SweepReport::sup_drift_relative() const {
  double lo = kInf, hi = -kInf;
  for (const SweepRecord& r : records) {
    lo = std::min(lo, r.sup_error);
    hi = std::max(hi, r.sup_error);
  }
  if (records.empty() || hi <= 0.0) return 0.0;
  return (hi - lo) / hi;
}

void SweepReport::write_csv(std::ostream& out, bool normalized_column) const {
  out << "L,l2_error,sup_error,sigma,b_mass";
  if (normalized_column) out << ",l2_normalized";
  out << "\n";
  const double first = records.empty() ? 0.0 : records.front().l2_error;
  for (const SweepRecord& r : records) {
    format17(out, r.lipschitz);
    out << ",";
    format17(out, r.l2_error);
    out << ",";
    format17(out, r.sup_error);
    out << ",";
    format17(out, r.sigma);
    out << ",";
    format17(out, r.b_mass);
    if (normalized_column) {
      out << ",";
      format17(out, first > 0.0 ? r.l2_error / first : 1.0);
    }
    out << "\n";
  }
}

void SweepReport::write_json(std::ostream& out) const {
  out << "{\n  \"grid_points_per_axis\": " << grid.points_per_axis << ",\n  \"records\": [";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SweepRecord& r = records[i];
    out << (i == 0 ? "\n" : ",\n") << "    {\"L\": ";
    format17(out, r.lipschitz);
    out << ", \"l2_error\": ";
    format17(out, r.l2_error);
    out << ", \"sup_error\": ";
    format17(out, r.sup_error);
    out << ", \"sigma\": ";
    format17(out, r.sigma);
    out << ", \"b_mass\": ";
    format17(out, r.b_mass);
    out << "}";
  }
  out << "\n  ],\n";
  out << "  \"monotone_l2\": " << (monotone_l2 ? "true" : "false") << ",\n";
  out << "  \"sup_constant\": " << (sup_constant ? "true" : "false") << ",\n";
  out << "  \"sup_drift_relative\": ";
  format17(out, sup_drift_relative());
  out << "\n}\n";
}

SweepReport sweep(std::shared_ptr<const Dataset> data, Norm norm,
                  const LipschitzSchedule& schedule, GridSpec grid_spec) {
  if (!data) throw std::invalid_argument("sweep: null dataset");
  const double bound = data->size() >= 2 ? lipschitz_lower_bound(*data, norm) : 0.0;
  if (schedule.values().front() < bound)
    throw std::invalid_argument("sweep: schedule starts at " +
                                std::to_string(schedule.values().front()) +
                                ", below the data lower bound " + std::to_string(bound));

  const Grid grid = make_grid(data->box(), grid_spec);
  const auto tree = SpatialTree::build(data);
  const BiasedIndex plain(tree, QueryMode::plain, 1.0, norm);

  std::vector<double> nn_label(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    nn_label[i] = data->y(plain.query(grid.point(i)).index);

  SweepReport report;
  report.grid = grid_spec;
  report.records.reserve(schedule.size());

  for (double lipschitz : schedule.values()) {
    const BiasedIndex up(tree, QueryMode::ceiling, lipschitz, norm);
    const BiasedIndex lo(tree, QueryMode::floor, lipschitz, norm);
    double sum = 0.0, sup = 0.0;
    std::size_t a_count = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const QueryResult uq = up.query(grid.point(i));
      const QueryResult lq = lo.query(grid.point(i));
      const double value = uq.index == lq.index ? data->y(uq.index)
                                                : 0.5 * (uq.value + lq.value);
      const double e = nn_label[i] - value;
      sum += e * e;
      sup = std::max(sup, std::abs(e));
      if (uq.index != lq.index) ++a_count;
    }
    SweepRecord rec;
    rec.lipschitz = lipschitz;
    rec.l2_error = std::sqrt(sum * grid.cell_volume());
    rec.sup_error = sup;
    rec.sigma = static_cast<double>(a_count) * grid.cell_volume();
    rec.b_mass = static_cast<double>(grid.size() - a_count) * grid.cell_volume();
    report.records.push_back(rec);
  }

  report.monotone_l2 = true;
  for (std::size_t i = 1; i < report.records.size(); ++i)
    if (report.records[i].l2_error >
        report.records[i - 1].l2_error + SweepReport::kMonotoneTolerance)
      report.monotone_l2 = false;
  report.sup_constant = report.sup_drift_relative() <= SweepReport::kSupConstantTolerance;
  return report;
}

std::vector<MonotonicityViolation> check_local_monotonicity(
    const NsmModel& lo, const NsmModel& hi, const NnModel& nn,
    std::span<const std::vector<double>> points, MonotonicityCounts* counts) {
  if (lo.data_ptr() != hi.data_ptr() || lo.norm() != hi.norm())
    throw std::invalid_argument(
        "check_local_monotonicity: models must share the dataset and the norm");
  if (!(hi.lipschitz() > lo.lipschitz()))
    throw std::invalid_argument(
        "check_local_monotonicity: second model must carry the larger estimate");
  require_same_models(lo, nn, "check_local_monotonicity");

  const Dataset& d = lo.data();
  std::vector<MonotonicityViolation> violations;

  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::span<const double> x(points[i]);
    const RichEval at_lo = rich_scan(d, lo.lipschitz(), lo.norm(), x);
    const RichEval at_hi = rich_scan(d, hi.lipschitz(), hi.norm(), x);

    const double nn_value = d.y(at_lo.label.voronoi_index);
    const double e_lo = std::abs(
        nn_value - predict_from_label(d, at_lo.label, at_lo.ceil_val, at_lo.floor_val));
    const double e_hi = std::abs(
        nn_value - predict_from_label(d, at_hi.label, at_hi.ceil_val, at_hi.floor_val));

    const bool interior_lo = at_lo.ceil_gap > kInteriorGapMargin &&
                             at_lo.floor_gap > kInteriorGapMargin &&
                             at_lo.vor_gap > kInteriorGapMargin;
    const bool interior_hi = at_hi.ceil_gap > kInteriorGapMargin &&
                             at_hi.floor_gap > kInteriorGapMargin;

    const bool a_lo = at_lo.label.kind() == CellKind::A;
    const bool a_hi = at_hi.label.kind() == CellKind::A;

    if (a_lo && a_hi && interior_lo && interior_hi &&
        at_lo.label.ceiling_index == at_hi.label.ceiling_index &&
        at_lo.label.floor_index == at_hi.label.floor_index &&
        (at_lo.label.voronoi_index == at_lo.label.ceiling_index ||
         at_lo.label.voronoi_index == at_lo.label.floor_index)) {
      if (counts) ++counts->same_pair_cases;
      if (!(e_lo > e_hi))
        violations.push_back({i, "same_pair_strict_decrease", e_lo, e_hi,
                              "A-cell pair persists with Voronoi support but |error| "
                              "did not strictly decrease"});
    }

    if (a_lo && interior_lo && !a_hi &&
        (at_hi.label.ceiling_index == at_lo.label.ceiling_index ||
         at_hi.label.ceiling_index == at_lo.label.floor_index)) {
      if (counts) ++counts->collapse_cases;
      if (!(e_lo > e_hi))
        violations.push_back({i, "collapse_strict_decrease", e_lo, e_hi,
                              "A cell collapsed into the agreement region but |error| "
                              "did not strictly decrease"});
    }

    if (at_lo.label.ceiling_index != at_hi.label.ceiling_index) {
      if (counts) ++counts->ceiling_changes;
      if (!(d.y(at_hi.label.ceiling_index) >= d.y(at_lo.label.ceiling_index)))
        violations.push_back({i, "ceiling_support_order", e_lo, e_hi,
                              "ceiling support changed toward a smaller label"});
    }
    if (at_lo.label.floor_index != at_hi.label.floor_index) {
      if (counts) ++counts->floor_changes;
      if (!(d.y(at_hi.label.floor_index) <= d.y(at_lo.label.floor_index)))
        violations.push_back({i, "floor_support_order", e_lo, e_hi,
                              "floor support changed toward a larger label"});
    }
  }
  return violations;
}

std::vector<std::vector<double>> grid_points(const Grid& grid) {
  std::vector<std::vector<double>> pts(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    pts[i].assign(grid.point(i).begin(), grid.point(i).end());
  return pts;
}

}  // namespace nsm
