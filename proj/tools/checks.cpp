#include "checks.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "common.hpp"
#include "nsm/fastquery.hpp"
#include "nsm/regressors.hpp"
#include "nsm/synthetic.hpp"

namespace cli {

namespace {

constexpr double kIdentityTolerance = 1e-12;

std::string describe_point(std::span<const double> x) {
  std::ostringstream os;
  os << "x=(";
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (a) os << ", ";
    format17(os, x[a]);
  }
  os << ")";
  return os.str();
}

void record(CheckResult& check, bool ok, std::span<const double> x,
            const std::string& detail) {
  ++check.cases;
  if (ok) return;
  ++check.violations;
  if (check.first_violation.empty())
    check.first_violation = describe_point(x) + ": " + detail;
}

nsm::QueryResult scan_reference(const nsm::Dataset& d, nsm::QueryMode mode,
                                double lipschitz, nsm::Norm p,
                                std::span<const double> x) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double dist = nsm::distance(x, d.x(j), p);
    double v = dist;
    if (mode == nsm::QueryMode::ceiling) v = d.y(j) + lipschitz * dist;
    if (mode == nsm::QueryMode::floor) v = lipschitz * dist - d.y(j);
    if (v < best) {
      best = v;
      best_idx = j;
    }
  }
  return {best_idx, mode == nsm::QueryMode::floor ? -best : best};
}

}  // namespace

CheckSuiteResult run_checks(const std::shared_ptr<const nsm::Dataset>& data,
                            nsm::Norm norm, const nsm::LipschitzSchedule& schedule,
                            nsm::GridSpec grid_spec, std::size_t oracle_queries,
                            std::uint64_t seed) {
  const nsm::Dataset& d = *data;
  const nsm::Grid grid = nsm::make_grid(d.box(), grid_spec);
  const nsm::NnModel nn(data, norm);
  const double f_e = nsm::error_bounds(d).f_e_bound;
  const double max_label = d.max_abs_label();

  CheckResult interpolation{"interpolation_exact"};
  CheckResult sandwich{"envelope_sandwich"};
  CheckResult b_agreement{"b_cell_agreement"};
  CheckResult ordering{"image_ordering"};
  CheckResult bounded{"prediction_bound"};
  CheckResult identity{"piecewise_error_identity"};
  CheckResult error_bound{"error_bound_strict"};
  CheckResult mass{"partition_mass"};
  CheckResult persistence{"agreement_persistence"};
  CheckResult sigma_mono{"sigma_monotone"};
  CheckResult local_mono{"local_monotonicity"};
  CheckResult lip_cont{"prediction_lipschitz"};
  CheckResult oracle{"fastquery_oracle"};

  std::vector<nsm::CellKind> prev_kinds;
  double prev_sigma = std::numeric_limits<double>::infinity();

  for (double lipschitz : schedule.values()) {
    const nsm::NsmModel model(data, lipschitz, norm);

    for (std::size_t n = 0; n < d.size(); ++n) {
      const bool ok = model.predict(d.x(n)) == d.y(n) && nn.predict(d.x(n)) == d.y(n);
      record(interpolation, ok, d.x(n), "regressor does not interpolate the sample");
    }

    std::vector<nsm::CellKind> kinds(grid.size());
    std::size_t a_count = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.point(i);
      const nsm::RegionLabel label = model.classify(x);
      kinds[i] = label.kind();
      if (label.kind() == nsm::CellKind::A) ++a_count;

      const double up = model.ceiling(x);
      const double lo = model.floor(x);
      const double mid = model.predict(x);
      record(sandwich, lo <= mid && mid <= up, x, "midpoint escaped the envelopes");

      const double err = nn.predict(x) - mid;
      if (label.kind() == nsm::CellKind::B) {
        record(b_agreement,
               label.voronoi_index == label.ceiling_index && err == 0.0, x,
               "agreement cell disagrees with its Voronoi cell");
      } else if (label.voronoi_index != label.ceiling_index &&
                 label.voronoi_index != label.floor_index) {
        record(ordering,
               d.y(label.ceiling_index) <= d.y(label.voronoi_index) &&
                   d.y(label.voronoi_index) <= d.y(label.floor_index),
               x, "Voronoi label left the ceiling/floor label interval");
      }

      record(bounded, std::abs(mid) <= max_label + kIdentityTolerance, x,
             "prediction exceeded the largest absolute label");
      record(identity,
             std::abs(err - nsm::error_closed_form(model, nn, x)) <= kIdentityTolerance,
             x, "direct and region-form errors disagree");
      record(error_bound, std::abs(err) < f_e, x, "error reached the a-priori bound");
    }

    const auto tm = nsm::transition_mass(model, grid);
    {
      ++mass.cases;
      const double total = tm.sigma + tm.b_mass;
      if (std::abs(total - d.box().volume()) > 1e-9 * d.box().volume()) {
        ++mass.violations;
        if (mass.first_violation.empty())
          mass.first_violation = "sigma + b_mass != box volume at L=" +
                                 std::to_string(lipschitz);
      }
    }
    {
      ++sigma_mono.cases;
      if (tm.sigma > prev_sigma) {
        ++sigma_mono.violations;
        if (sigma_mono.first_violation.empty())
          sigma_mono.first_violation =
              "sigma grew at L=" + std::to_string(lipschitz);
      }
      prev_sigma = tm.sigma;
    }
    if (!prev_kinds.empty()) {
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (prev_kinds[i] == nsm::CellKind::B)
          record(persistence, kinds[i] == nsm::CellKind::B, grid.point(i),
                 "agreement cell reverted to transition at L=" +
                     std::to_string(lipschitz));
    }
    prev_kinds = std::move(kinds);

    {
      nsm::UniformSampler rng(seed ^ 0x5bf0f3a7u);
      for (std::size_t it = 0; it < 200; ++it) {
        std::vector<double> a(d.dimension()), b(d.dimension());
        for (std::size_t c = 0; c < d.dimension(); ++c) {
          a[c] = rng.in(d.box().lower()[c], d.box().upper()[c]);
          b[c] = rng.in(d.box().lower()[c], d.box().upper()[c]);
        }
        const double gap = std::abs(model.predict(a) - model.predict(b));
        record(lip_cont,
               gap <= lipschitz * nsm::distance(a, b, norm) + kIdentityTolerance, a,
               "prediction gap exceeded L times the distance");
      }
    }
  }

  // Local monotonicity across consecutive schedule pairs.
  {
    const auto pts = nsm::grid_points(grid);
    for (std::size_t k = 0; k + 1 < schedule.size(); ++k) {
      const nsm::NsmModel lo(data, schedule.values()[k], norm);
      const nsm::NsmModel hi(data, schedule.values()[k + 1], norm);
      nsm::MonotonicityCounts counts;
      const auto violations = nsm::check_local_monotonicity(lo, hi, nn, pts, &counts);
      local_mono.cases += counts.same_pair_cases + counts.collapse_cases +
                          counts.ceiling_changes + counts.floor_changes;
      local_mono.violations += violations.size();
      if (!violations.empty() && local_mono.first_violation.empty())
        local_mono.first_violation =
            violations.front().rule + ": " + violations.front().detail;
    }
  }

  // Exact agreement between the spatial index and the reference scan.
  {
    const auto tree = nsm::SpatialTree::build(data);
    nsm::UniformSampler rng(seed ^ 0x9d2c5680u);
    const double lipschitz = schedule.values().back();
    std::vector<nsm::BiasedIndex> indices{
        nsm::BiasedIndex(tree, nsm::QueryMode::ceiling, lipschitz, norm),
        nsm::BiasedIndex(tree, nsm::QueryMode::floor, lipschitz, norm),
        nsm::BiasedIndex(tree, nsm::QueryMode::plain, lipschitz, norm)};
    const nsm::QueryMode modes[] = {nsm::QueryMode::ceiling, nsm::QueryMode::floor,
                                    nsm::QueryMode::plain};
    for (std::size_t q = 0; q < oracle_queries; ++q) {
      std::vector<double> x(d.dimension());
      for (std::size_t c = 0; c < d.dimension(); ++c)
        x[c] = rng.in(d.box().lower()[c], d.box().upper()[c]);
      for (std::size_t m = 0; m < 3; ++m) {
        const auto got = indices[m].query(x);
        const auto want = scan_reference(d, modes[m], lipschitz, norm, x);
        record(oracle, got.index == want.index && got.value == want.value, x,
               "index result diverged from the scan");
      }
    }
  }

  CheckSuiteResult result;
  result.checks = {interpolation, sandwich, b_agreement, ordering,   bounded,
                   identity,      error_bound, mass,     persistence, sigma_mono,
                   local_mono,    lip_cont,  oracle};
  return result;
}

void write_check_json(std::ostream& out, const CheckSuiteResult& result,
                      const nsm::Dataset& data, nsm::Norm norm,
                      const nsm::LipschitzSchedule& schedule, nsm::GridSpec grid,
                      std::size_t oracle_queries, std::uint64_t seed) {
  const auto report = nsm::validate(data);
  out << "{\n  \"dataset\": {\"n\": " << data.size()
      << ", \"dimension\": " << data.dimension() << ", \"norm\": \""
      << nsm::to_string(norm) << "\", \"has_distinct_labels\": "
      << (report.has_distinct_labels ? "true" : "false")
      << ", \"duplicate_feature_conflicts\": " << report.duplicate_feature_conflicts.size()
      << "},\n";
  out << "  \"config\": {\"grid_points_per_axis\": " << grid.points_per_axis
      << ", \"oracle_queries\": " << oracle_queries << ", \"seed\": " << seed
      << ", \"schedule\": [";
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i) out << ", ";
    format17(out, schedule.values()[i]);
  }
  out << "]},\n  \"checks\": [";
  for (std::size_t i = 0; i < result.checks.size(); ++i) {
    const CheckResult& c = result.checks[i];
    out << (i == 0 ? "\n" : ",\n") << "    {\"name\": \"" << c.name
        << "\", \"cases\": " << c.cases << ", \"violations\": " << c.violations
        << ", \"pass\": " << (c.pass() ? "true" : "false") << ", \"first_violation\": \"";
    for (char ch : c.first_violation) {
      if (ch == '"' || ch == '\\') out << '\\';
      out << ch;
    }
    out << "\"}";
  }
  out << "\n  ],\n  \"all_pass\": " << (result.all_pass() ? "true" : "false") << "\n}\n";
}

}  // namespace cli
