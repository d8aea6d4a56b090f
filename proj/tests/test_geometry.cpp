#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "nsm/geometry.hpp"
#include "nsm/synthetic.hpp"

using namespace nsm;

TEST_CASE("norm examples") {
  const std::vector<double> a{3.0, 4.0};
  const std::vector<double> b{3.0, -4.0};
  CHECK(vector_norm(a, Norm::l2) == 5.0);
  CHECK(vector_norm(b, Norm::l1) == 7.0);
  CHECK(vector_norm(b, Norm::linf) == 4.0);
}

TEST_CASE("norm rejects empty vectors") {
  CHECK_THROWS_AS(vector_norm({}, Norm::l2), std::invalid_argument);
  const std::vector<double> a{1.0};
  CHECK_THROWS_AS(distance(a, {}, Norm::l1), std::invalid_argument);
}

TEST_CASE("norm axioms on random triples") {
  UniformSampler rng(41);
  for (Norm p : {Norm::l1, Norm::l2, Norm::linf}) {
    for (int it = 0; it < 200; ++it) {
      const std::size_t dim = 1 + static_cast<std::size_t>(rng.raw() % 6);
      std::vector<double> u(dim), v(dim), sum(dim), scaled(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        u[i] = rng.in(-5.0, 5.0);
        v[i] = rng.in(-5.0, 5.0);
        sum[i] = u[i] + v[i];
      }
      const double alpha = rng.in(-3.0, 3.0);
      for (std::size_t i = 0; i < dim; ++i) scaled[i] = alpha * u[i];

      const double nu = vector_norm(u, p);
      const double nv = vector_norm(v, p);
      CHECK(nu >= 0.0);
      CHECK(vector_norm(sum, p) <= nu + nv + 1e-12);
      CHECK(vector_norm(scaled, p) ==
            doctest::Approx(std::abs(alpha) * nu).epsilon(1e-12));
    }
    const std::vector<double> zero(4, 0.0);
    CHECK(vector_norm(zero, p) == 0.0);
  }
}

TEST_CASE("norm is definite") {
  UniformSampler rng(42);
  for (int it = 0; it < 100; ++it) {
    std::vector<double> v(3, 0.0);
    v[rng.raw() % 3] = rng.in(0.1, 2.0);
    for (Norm p : {Norm::l1, Norm::l2, Norm::linf}) CHECK(vector_norm(v, p) > 0.0);
  }
}

TEST_CASE("norm string round trip") {
  for (Norm p : {Norm::l1, Norm::l2, Norm::linf})
    CHECK(norm_from_string(to_string(p)) == p);
  CHECK_THROWS_AS(norm_from_string("3"), std::invalid_argument);
}

TEST_CASE("domain box validation and membership") {
  CHECK_THROWS_AS(DomainBox({0.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(DomainBox({1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(DomainBox({}, {}), std::invalid_argument);

  const DomainBox box({0.0, 0.0}, {1.0, 1.0});
  CHECK(box.volume() == 1.0);
  CHECK(box.contains(std::vector<double>{0.0, 1.0}));  // closed boundary
  CHECK(box.contains(std::vector<double>{0.5, 0.5}));
  CHECK(!box.contains(std::vector<double>{1.5, 0.5}));
  CHECK(!box.contains(std::vector<double>{0.5}));
}

TEST_CASE("point-to-box distance closed forms") {
  const DomainBox box({0.0, 0.0}, {1.0, 1.0});
  const std::vector<double> inside{0.3, 0.8};
  for (Norm p : {Norm::l1, Norm::l2, Norm::linf})
    CHECK(box.distance_to(inside, p) == 0.0);

  const std::vector<double> right{2.0, 0.5};
  CHECK(box.distance_to(right, Norm::l2) == 1.0);
  CHECK(box.distance_to(right, Norm::l1) == 1.0);
  CHECK(box.distance_to(right, Norm::linf) == 1.0);

  const std::vector<double> corner{2.0, 2.0};
  CHECK(box.distance_to(corner, Norm::l2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(box.distance_to(corner, Norm::l1) == 2.0);
  CHECK(box.distance_to(corner, Norm::linf) == 1.0);
}

TEST_CASE("grid midpoints on [0,1] with 2 points") {
  const Grid g = make_grid(DomainBox({0.0}, {1.0}), GridSpec{2});
  REQUIRE(g.size() == 2);
  CHECK(g.point(0)[0] == 0.25);
  CHECK(g.point(1)[0] == 0.75);
  CHECK(g.cell_volume() == 0.5);
}

TEST_CASE("grid on [0,10]^2 with 3 per axis") {
  const Grid g = make_grid(DomainBox({0.0, 0.0}, {10.0, 10.0}), GridSpec{3});
  REQUIRE(g.size() == 9);
  CHECK(g.cell_volume() == doctest::Approx(100.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("grid row-major order on [0,2]x[0,4] with 2 per axis") {
  const Grid g = make_grid(DomainBox({0.0, 0.0}, {2.0, 4.0}), GridSpec{2});
  REQUIRE(g.size() == 4);
  const double expected[4][2] = {{0.5, 1.0}, {0.5, 3.0}, {1.5, 1.0}, {1.5, 3.0}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g.point(i)[0] == expected[i][0]);
    CHECK(g.point(i)[1] == expected[i][1]);
  }
  CHECK(g.cell_volume() == 2.0);
}

TEST_CASE("grid rejects zero points per axis") {
  CHECK_THROWS_AS(make_grid(DomainBox({0.0}, {1.0}), GridSpec{0}), std::invalid_argument);
}

TEST_CASE("grid points are strictly interior and cells tile the box") {
  UniformSampler rng(43);
  for (int it = 0; it < 20; ++it) {
    const std::size_t dim = 1 + static_cast<std::size_t>(rng.raw() % 3);
    std::vector<double> lo(dim), hi(dim);
    for (std::size_t a = 0; a < dim; ++a) {
      lo[a] = rng.in(-5.0, 0.0);
      hi[a] = lo[a] + rng.in(0.5, 10.0);
    }
    const DomainBox box(lo, hi);
    const std::size_t n = 2 + static_cast<std::size_t>(rng.raw() % 7);
    const Grid g = make_grid(box, GridSpec{n});

    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t a = 0; a < dim; ++a) {
        CHECK(g.point(i)[a] > lo[a]);
        CHECK(g.point(i)[a] < hi[a]);
      }
    CHECK(static_cast<double>(g.size()) * g.cell_volume() ==
          doctest::Approx(box.volume()).epsilon(1e-9));
  }
}

TEST_CASE("grid generation is deterministic") {
  const DomainBox box({0.0, -1.0}, {3.0, 2.0});
  const Grid a = make_grid(box, GridSpec{17});
  const Grid b = make_grid(box, GridSpec{17});
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.point(0).data(), b.point(0).data(),
                    a.size() * a.dimension() * sizeof(double)) == 0);
  CHECK(a.cell_volume() == b.cell_volume());
}
