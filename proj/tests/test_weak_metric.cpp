// Weak-distance surrogate: closed-form values, pseudometric properties, and
// agreement between the direct evaluator and the precomputed pairing table.
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gfdeconv/generalized.hpp"
#include "gfdeconv/rng.hpp"
#include "gfdeconv/weak_metric.hpp"

using namespace gfd;

namespace {

const Grid kGrid(20.0, 1024);

GriddedFunction gauss_field(double var, double shift = 0.0) {
  return tabulate(kGrid, [var, shift](double x) {
    const double u = x - shift;
    return std::exp(-u * u / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
  });
}

// Seed-determined composite: a few random Gaussian lobes plus one atom.
GeneralizedFunction random_element(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> center(3), width(3);
  std::vector<cplx> amp(3);
  for (int i = 0; i < 3; ++i) {
    center[i] = 8.0 * (rng.uniform() - 0.5);
    width[i] = 0.5 + 2.0 * rng.uniform();
    amp[i] = cplx(rng.normal(), rng.normal());
  }
  auto f = tabulate(kGrid, [&](double x) {
    cplx v{};
    for (int i = 0; i < 3; ++i) {
      const double u = (x - center[i]) / width[i];
      v += amp[i] * std::exp(-0.5 * u * u);
    }
    return v;
  });
  GeneralizedFunction b = GeneralizedFunction::from_regular(std::move(f));
  const int order = static_cast<int>(rng.uniform() * 3.0);  // 0, 1, or 2
  b.atoms.push_back(Atom{{8.0 * (rng.uniform() - 0.5)},
                         cplx(rng.normal(), rng.normal()),
                         {order}});
  return b;
}

}  // namespace

TEST_CASE("weak distance of an element from itself is zero") {
  const auto b = random_element(11);
  const auto set = default_test_set();
  CHECK(weak_distance(b, b, set) == 0.0);
  const auto g = gauss_field(1.0);
  CHECK(weak_distance(g, g, set) == 0.0);
}

TEST_CASE("point mass at the origin vs zero: distance is the largest |psi(0)|") {
  // Over unit-scale Hermite functions the largest origin value is order 0,
  // pi^{-1/4}; odd orders vanish at 0 and even orders decrease.
  const auto delta = GeneralizedFunction::dirac(0.0);
  const auto zero = GeneralizedFunction::from_regular(
      tabulate(kGrid, [](double) { return 0.0; }));
  const auto set = hermite_test_set(16, 1.0);
  const double d = weak_distance(delta, zero, set);
  CHECK(d == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-12));
}

TEST_CASE("small density perturbation stays small in the weak distance") {
  const auto set = default_test_set();
  const double d = weak_distance(gauss_field(1.0), gauss_field(1.0 + 1e-4), set);
  CHECK(d > 0.0);
  CHECK(d < 1e-4);
}

TEST_CASE("pseudometric properties on random elements") {
  const auto set = default_test_set();
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto a = random_element(3 * seed);
    const auto b = random_element(3 * seed + 1);
    const auto c = random_element(3 * seed + 2);
    const double dab = weak_distance(a, b, set);
    const double dba = weak_distance(b, a, set);
    const double dbc = weak_distance(b, c, set);
    const double dac = weak_distance(a, c, set);
    CHECK(dab == dba);
    CHECK(dab >= 0.0);
    CHECK(dac <= dab + dbc + 1e-12);
    CHECK(weak_distance(a, a, set) == 0.0);
  }
}

TEST_CASE("empty test set is rejected") {
  const auto b = random_element(1);
  CHECK_THROWS_AS(weak_distance(b, b, std::span<const TestFunction>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(WeakMetricTable(kGrid, {}), std::invalid_argument);
}

TEST_CASE("pairing table agrees with the direct evaluator") {
  const WeakMetricTable table(kGrid, default_test_set());
  const auto set = default_test_set();
  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    const auto a = random_element(2 * seed);
    const auto b = random_element(2 * seed + 1);
    const double dt = table.distance(a, b);
    const double dd = weak_distance(a, b, set);
    CHECK(dt == doctest::Approx(dd).epsilon(1e-10));
  }
}

TEST_CASE("pairing table: per-functional values match apply_functional") {
  const WeakMetricTable table(kGrid, default_test_set());
  const auto b = random_element(77);
  const auto vals = table.pair_all(b);
  REQUIRE(vals.size() == table.test_set().size());
  for (std::size_t t = 0; t < vals.size(); ++t) {
    const cplx direct = apply_functional(b, table.test_set()[t]);
    CHECK(std::abs(vals[t] - direct) < 1e-10);
  }
}

TEST_CASE("pairing table: hot path from cached reference values") {
  const WeakMetricTable table(kGrid, default_test_set());
  const auto set = default_test_set();
  const auto g1 = gauss_field(1.0);
  const auto g2 = gauss_field(1.3, 0.4);
  const auto ref = table.pair_all(g1);
  const double hot = table.distance_from(ref, g2);
  const double direct = weak_distance(g1, g2, set);
  CHECK(hot == doctest::Approx(direct).epsilon(1e-10));
  CHECK_THROWS_AS(table.distance_from(std::vector<cplx>(3), g2), std::invalid_argument);
}

TEST_CASE("pairing table rejects mismatched grids") {
  const WeakMetricTable table(kGrid, default_test_set());
  const Grid other(10.0, 512);
  CHECK_THROWS_AS(table.pair_all(tabulate(other, [](double) { return 1.0; })),
                  std::invalid_argument);
}
