#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "nsm/analysis.hpp"
#include "nsm/synthetic.hpp"
#include "test_util.hpp"

using namespace nsm;
using testutil::ramp_dataset;

namespace {

std::shared_ptr<const Dataset> section5_dataset(std::uint64_t seed = 7) {
  const auto& fn = synthetic_function("cos_plus_sin");
  return std::make_shared<Dataset>(sample_synthetic("cos_plus_sin", fn.default_box, 30, seed));
}

// Reference discrepancy for the unit ramp {0->0, 1->1} with estimate L,
// written from the definitions rather than through the library.
double ramp_error_reference(double x, double lipschitz) {
  const double nn = x < 0.5 ? 0.0 : (x == 0.5 ? 0.0 : 1.0);
  const double up = std::min(lipschitz * x, 1.0 + lipschitz * (1.0 - x));
  const double lo = std::max(-lipschitz * x, 1.0 - lipschitz * (1.0 - x));
  return nn - 0.5 * (up + lo);
}

}  // namespace

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(LipschitzSchedule::from_values({}), std::invalid_argument);
  CHECK_THROWS_AS(LipschitzSchedule::from_values({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LipschitzSchedule::from_values({2.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LipschitzSchedule::from_values({-1.0, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(LipschitzSchedule::from_values({0.5}));

  const auto sched = LipschitzSchedule::linspace(2.0, 30.0, 29);
  REQUIRE(sched.size() == 29);
  for (std::size_t k = 0; k < 29; ++k)
    CHECK(sched.values()[k] == 2.0 + static_cast<double>(k));
}

TEST_CASE("error bounds from the labels") {
  const auto d = testutil::make_shared_dataset({{{0.0}, -3.0}, {{1.0}, 2.0}},
                                               DomainBox({0.0}, {1.0}));
  const auto b = error_bounds(*d);
  CHECK(b.f_nsm_bound == 3.0);
  CHECK(b.f_nn_bound == 3.0);
  CHECK(b.f_e_bound == 6.0);
}

TEST_CASE("pointwise error on the ramp") {
  const auto d = ramp_dataset();
  const NsmModel nsm(d, 2.0, Norm::l2);
  const NnModel nn(d, Norm::l2);

  CHECK(error_at(nsm, nn, std::vector<double>{0.4}) ==
        doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(error_at(nsm, nn, std::vector<double>{0.5}) == -0.5);
  CHECK(error_at(nsm, nn, std::vector<double>{0.0}) == 0.0);
  CHECK(error_at(nsm, nn, std::vector<double>{1.0}) == 0.0);
}

TEST_CASE("error requires matching models") {
  const auto d = ramp_dataset();
  const NsmModel nsm(d, 2.0, Norm::l2);
  const NnModel other_norm(d, Norm::l1);
  CHECK_THROWS_AS(error_at(nsm, other_norm, std::vector<double>{0.4}),
                  std::invalid_argument);
  const NnModel other_data(ramp_dataset(), Norm::l2);
  CHECK_THROWS_AS(error_at(nsm, other_data, std::vector<double>{0.4}),
                  std::invalid_argument);
}

TEST_CASE("closed-form error agrees with the subtraction route") {
  for (std::uint64_t seed : {60ull, 61ull}) {
    for (std::size_t dim : {1u, 2u}) {
      const auto d = testutil::random_dataset(seed, 18, dim);
      for (Norm p : {Norm::l1, Norm::l2, Norm::linf}) {
        const double lip = lipschitz_lower_bound(*d, p) * 1.35 + 0.1;
        const NsmModel nsm(d, lip, p);
        const NnModel nn(d, p);
        for (const auto& x : testutil::random_points(seed + 9, 250, d->box())) {
          const double direct = error_at(nsm, nn, x);
          const double closed = error_closed_form(nsm, nn, x);
          CHECK(std::abs(direct - closed) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("error vanishes identically on agreement cells") {
  const auto d = section5_dataset();
  const NsmModel nsm(d, 2.0, Norm::l2);
  const NnModel nn(d, Norm::l2);
  std::size_t b_count = 0;
  for (const auto& x : testutil::random_points(70, 600, d->box())) {
    if (nsm.classify(x).kind() != CellKind::B) continue;
    ++b_count;
    CHECK(error_at(nsm, nn, x) == 0.0);
  }
  CHECK(b_count > 0);
}

TEST_CASE("l2 error against a refined-grid reference") {
  const auto d = ramp_dataset();
  const NsmModel nsm(d, 2.0, Norm::l2);
  const NnModel nn(d, Norm::l2);
  const double got = l2_error(nsm, nn, GridSpec{1000});

  double sum = 0.0;
  const std::size_t refine = 1000000;
  for (std::size_t k = 0; k < refine; ++k) {
    const double x = (static_cast<double>(k) + 0.5) / static_cast<double>(refine);
    const double e = ramp_error_reference(x, 2.0);
    sum += e * e;
  }
  const double reference = std::sqrt(sum / static_cast<double>(refine));
  CHECK(got == doctest::Approx(reference).epsilon(1e-3));
}

TEST_CASE("degenerate datasets have zero discrepancy at any estimate") {
  const auto equal = testutil::make_shared_dataset(
      {{{1.0, 1.0}, 2.0}, {{5.0, 2.0}, 2.0}, {{3.0, 8.0}, 2.0}},
      DomainBox({0.0, 0.0}, {10.0, 10.0}));
  for (double lip : {0.5, 2.0, 100.0}) {
    const NsmModel nsm(equal, lip, Norm::l2);
    const NnModel nn(equal, Norm::l2);
    CHECK(l2_error(nsm, nn, GridSpec{40}) == 0.0);
    CHECK(sup_error(nsm, nn, GridSpec{40}) == 0.0);
    CHECK(transition_mass(nsm, GridSpec{40}).sigma == 0.0);
  }

  const auto single = testutil::make_shared_dataset({{{0.5}, 3.0}},
                                                    DomainBox({0.0}, {1.0}));
  const NsmModel nsm(single, 1.0, Norm::l2);
  const NnModel nn(single, Norm::l2);
  CHECK(l2_error(nsm, nn, GridSpec{100}) == 0.0);
  CHECK(sup_error(nsm, nn, GridSpec{100}) == 0.0);
}

TEST_CASE("sup error: analytic local maximum on the ramp") {
  const auto d = ramp_dataset();
  const NnModel nn(d, Norm::l2);

  // The grid maximum approaches the 0.5 local maximum from below as the
  // grid refines; an odd count places a midpoint exactly on it.
  const NsmModel nsm2(d, 2.0, Norm::l2);
  const double sup_even = sup_error(nsm2, nn, GridSpec{1000});
  CHECK(sup_even <= 0.5);
  CHECK(sup_even >= 0.5 - 4.0 / 1000.0);
  CHECK(sup_error(nsm2, nn, GridSpec{1001}) == 0.5);

  for (double lip : {4.0, 8.0, 16.0}) {
    const NsmModel nsm(d, lip, Norm::l2);
    CHECK(sup_error(nsm, nn, GridSpec{1001}) == 0.5);
  }
}

TEST_CASE("sup invariance tightens on refined grids") {
  const auto d = ramp_dataset();
  const NnModel nn(d, Norm::l2);
  double previous_spread = 1.0;
  for (std::size_t grid : {100u, 1000u, 10000u}) {
    double lo = 1e300, hi = 0.0;
    for (double lip : {2.0, 4.0, 8.0, 16.0}) {
      const NsmModel nsm(d, lip, Norm::l2);
      const double s = sup_error(nsm, nn, GridSpec{grid});
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    const double spread = hi - lo;
    CHECK(spread <= previous_spread + 1e-15);
    previous_spread = spread;
  }
  CHECK(previous_spread < 0.01);
}

TEST_CASE("transition mass shrinks as the estimate grows") {
  const auto d = section5_dataset();
  const Grid grid = make_grid(d->box(), GridSpec{80});
  double previous = 1e300;
  for (double lip : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    const NsmModel nsm(d, lip, Norm::l2);
    const auto mass = transition_mass(nsm, grid);
    CHECK(mass.sigma + mass.b_mass == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(mass.sigma <= previous);
    previous = mass.sigma;
  }

  const double bound = lipschitz_lower_bound(*d, Norm::l2);
  const NsmModel extreme(d, bound * 1e6, Norm::l2);
  CHECK(transition_mass(extreme, grid).sigma < 1.0);  // below 1% of the box
}

TEST_CASE("agreement region persists pointwise as the estimate grows") {
  const auto d = section5_dataset();
  const Grid grid = make_grid(d->box(), GridSpec{60});
  const double lips[] = {2.0, 3.0, 5.0, 9.0, 17.0};
  std::vector<RegionLabel> prev;
  for (double lip : lips) {
    const NsmModel nsm(d, lip, Norm::l2);
    std::vector<RegionLabel> cur(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) cur[i] = nsm.classify(grid.point(i));
    if (!prev.empty())
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (prev[i].kind() == CellKind::B) CHECK(cur[i].kind() == CellKind::B);
    prev = std::move(cur);
  }
}

TEST_CASE("sweep matches the standalone operations bit for bit") {
  const auto d = section5_dataset();
  const auto schedule = LipschitzSchedule::from_values({2.0, 4.0, 16.0});
  const GridSpec spec{40};
  const SweepReport report = sweep(d, Norm::l2, schedule, spec);
  REQUIRE(report.records.size() == 3);

  const Grid grid = make_grid(d->box(), spec);
  const NnModel nn(d, Norm::l2);
  for (const SweepRecord& rec : report.records) {
    const NsmModel nsm(d, rec.lipschitz, Norm::l2);
    CHECK(rec.l2_error == l2_error(nsm, nn, grid));
    CHECK(rec.sup_error == sup_error(nsm, nn, grid));
    const auto mass = transition_mass(nsm, grid);
    CHECK(rec.sigma == mass.sigma);
    CHECK(rec.b_mass == mass.b_mass);
  }
}

TEST_CASE("sweep flags and bound chain") {
  const auto d = section5_dataset();
  const auto schedule = LipschitzSchedule::linspace(2.0, 30.0, 15);
  const SweepReport report = sweep(d, Norm::l2, schedule, GridSpec{60});

  const double f_e = error_bounds(*d).f_e_bound;
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const SweepRecord& rec = report.records[i];
    CHECK(rec.l2_error * rec.l2_error <= f_e * f_e * rec.sigma * (1.0 + 1e-9) + 1e-12);
    if (i > 0) CHECK(rec.sigma <= report.records[i - 1].sigma);
  }
  CHECK(report.records.back().l2_error < report.records.front().l2_error);
}

TEST_CASE("pointwise error stays strictly inside the a-priori bound") {
  const auto d = section5_dataset();
  const NnModel nn(d, Norm::l2);
  const double f_e = error_bounds(*d).f_e_bound;
  for (double lip : {2.0, 16.0}) {
    const NsmModel nsm(d, lip, Norm::l2);
    for (const auto& x : testutil::random_points(91, 500, d->box()))
      CHECK(std::abs(error_at(nsm, nn, x)) < f_e);
  }
}

TEST_CASE("univariate sweeps decrease monotonically") {
  for (std::uint64_t seed : {301ull, 302ull, 303ull}) {
    const auto d = testutil::random_dataset(seed, 12, 1);
    const double bound = lipschitz_lower_bound(*d, Norm::l2);
    const auto schedule = LipschitzSchedule::from_values(
        {bound * 1.05 + 0.01, bound * 1.4 + 0.02, bound * 2.0 + 0.05,
         bound * 3.1 + 0.1, bound * 5.0 + 0.2});
    const SweepReport report = sweep(d, Norm::l2, schedule, GridSpec{400});
    CHECK(report.monotone_l2);
  }
}

TEST_CASE("univariate error decrease is pointwise") {
  for (std::uint64_t seed : {311ull, 312ull}) {
    const auto d = testutil::random_dataset(seed, 10, 1);
    const double bound = lipschitz_lower_bound(*d, Norm::l2);
    const NnModel nn(d, Norm::l2);
    const Grid grid = make_grid(d->box(), GridSpec{500});
    double lips[] = {bound * 1.1 + 0.01, bound * 1.7 + 0.05, bound * 2.6 + 0.1};
    for (std::size_t k = 0; k + 1 < 3; ++k) {
      const NsmModel lo(d, lips[k], Norm::l2);
      const NsmModel hi(d, lips[k + 1], Norm::l2);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double e_lo = std::abs(error_at(lo, nn, grid.point(i)));
        const double e_hi = std::abs(error_at(hi, nn, grid.point(i)));
        CHECK(e_lo >= e_hi - 1e-12);
      }
    }
  }
}

TEST_CASE("sweep on the ramp keeps the sup flag with an on-grid maximizer") {
  const SweepReport report = sweep(ramp_dataset(), Norm::l2,
                                   LipschitzSchedule::from_values({2.0, 4.0, 8.0, 16.0}),
                                   GridSpec{1001});
  CHECK(report.sup_constant);
  CHECK(report.monotone_l2);
  CHECK(report.sup_drift_relative() == 0.0);
}

TEST_CASE("sweep input validation") {
  const auto d = section5_dataset();
  CHECK_THROWS_AS(sweep(d, Norm::l2, LipschitzSchedule::from_values({0.5, 1.0}),
                        GridSpec{10}),
                  std::invalid_argument);

  const SweepReport one = sweep(d, Norm::l2, LipschitzSchedule::from_values({2.0}),
                                GridSpec{10});
  CHECK(one.records.size() == 1);
  CHECK(one.monotone_l2);  // vacuously
}

TEST_CASE("local monotonicity: ramp collapse case") {
  const auto d = ramp_dataset();
  const NsmModel lo(d, 2.0, Norm::l2);
  const NsmModel hi(d, 4.0, Norm::l2);
  const NnModel nn(d, Norm::l2);

  // x = 0.3 sits in the transition region at L=2 and in the agreement
  // region at L=4; x = 0.05 is in agreement at both.
  std::vector<std::vector<double>> pts{{0.3}, {0.05}};
  MonotonicityCounts counts;
  const auto violations = check_local_monotonicity(lo, hi, nn, pts, &counts);
  CHECK(violations.empty());
  CHECK(counts.collapse_cases == 1);
  CHECK(error_at(lo, nn, pts[0]) == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(error_at(hi, nn, pts[0]) == 0.0);
  CHECK(error_at(lo, nn, pts[1]) == 0.0);
  CHECK(error_at(hi, nn, pts[1]) == 0.0);
}

TEST_CASE("local monotonicity holds on random planar datasets") {
  for (std::uint64_t seed : {401ull, 402ull, 403ull}) {
    const auto d = testutil::random_dataset(seed, 20, 2);
    const double bound = lipschitz_lower_bound(*d, Norm::l2);
    const NnModel nn(d, Norm::l2);
    const auto pts = testutil::random_points(seed + 11, 1000, d->box());
    double lips[] = {bound * 1.08 + 0.02, bound * 1.6 + 0.05, bound * 2.5 + 0.1,
                     bound * 4.0 + 0.2};
    MonotonicityCounts counts;
    for (std::size_t k = 0; k + 1 < 4; ++k) {
      const NsmModel lo(d, lips[k], Norm::l2);
      const NsmModel hi(d, lips[k + 1], Norm::l2);
      CHECK(check_local_monotonicity(lo, hi, nn, pts, &counts).empty());
    }
    CHECK(counts.same_pair_cases > 0);
    CHECK(counts.ceiling_changes + counts.floor_changes > 0);
  }
}

TEST_CASE("local monotonicity rejects mismatched models") {
  const auto d = ramp_dataset();
  const NsmModel lo(d, 2.0, Norm::l2);
  const NsmModel hi(d, 4.0, Norm::l2);
  const NnModel nn(d, Norm::l2);
  std::vector<std::vector<double>> pts{{0.3}};
  CHECK_THROWS_AS(check_local_monotonicity(hi, lo, nn, pts), std::invalid_argument);
  const NsmModel other(ramp_dataset(), 4.0, Norm::l2);
  CHECK_THROWS_AS(check_local_monotonicity(lo, other, nn, pts), std::invalid_argument);
}

TEST_CASE("report serialization") {
  const auto d = section5_dataset();
  const SweepReport report = sweep(d, Norm::l2, LipschitzSchedule::from_values({2.0, 4.0}),
                                   GridSpec{20});

  std::ostringstream csv;
  report.write_csv(csv, /*normalized_column=*/true);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "L,l2_error,sup_error,sigma,b_mass,l2_normalized");
  std::getline(lines, line);
  CHECK(line.substr(line.rfind(',') + 1) == "1");  // self-normalization

  std::ostringstream json_out;
  report.write_json(json_out);
  const auto parsed = nlohmann::json::parse(json_out.str());
  CHECK(parsed["grid_points_per_axis"] == 20);
  REQUIRE(parsed["records"].size() == 2);
  CHECK(parsed["records"][0]["L"] == 2.0);
  CHECK(parsed["records"][0]["l2_error"].get<double>() == report.records[0].l2_error);
  CHECK(parsed["monotone_l2"].is_boolean());
}

TEST_CASE("grid points helper round trips the grid") {
  const Grid grid = make_grid(DomainBox({0.0, 0.0}, {1.0, 2.0}), GridSpec{3});
  const auto pts = grid_points(grid);
  REQUIRE(pts.size() == grid.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t a = 0; a < 2; ++a) CHECK(pts[i][a] == grid.point(i)[a]);
}
