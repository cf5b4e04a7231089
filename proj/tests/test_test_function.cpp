#include "doctest.h"

#include <cmath>
#include <numbers>

#include "gfdeconv/fourier.hpp"
#include "gfdeconv/grid.hpp"
#include "gfdeconv/test_function.hpp"

using namespace gfd;

namespace {

constexpr double kPi = std::numbers::pi;

GriddedFunction on_grid(const TestFunction& psi, const Grid& g) {
  return tabulate(g, [&](double x) { return psi(x); });
}

}  // namespace

TEST_CASE("lowest Hermite function has the standard closed form") {
  const auto h0 = TestFunction::hermite(0);
  const double c = std::pow(kPi, -0.25);
  CHECK(std::abs(h0(0.0) - cplx(c)) < 1e-15);
  CHECK(std::abs(h0(1.3) - cplx(c * std::exp(-0.5 * 1.3 * 1.3))) < 1e-15);
}

TEST_CASE("Hermite functions are orthonormal under grid quadrature") {
  const Grid g(20.0, 1024);
  std::vector<GriddedFunction> fs;
  for (int k = 0; k < 16; ++k) fs.push_back(on_grid(TestFunction::hermite(k), g));
  for (int j = 0; j < 16; ++j)
    for (int k = j; k < 16; ++k) {
      GriddedFunction prod(g);
      for (std::size_t i = 0; i < g.points(); ++i)
        prod.values[i] = fs[j].values[i] * std::conj(fs[k].values[i]);
      const double target = (j == k) ? 1.0 : 0.0;
      CHECK(std::abs(quadrature(prod) - target) < 1e-8);
    }
}

TEST_CASE("scaled Hermite functions stay normalized") {
  const Grid g(20.0, 1024);
  for (double scale : {0.5, 1.0, 2.0})
    for (int k : {0, 7, 15}) {
      const auto f = on_grid(TestFunction::hermite(k, scale), g);
      GriddedFunction prod(g);
      for (std::size_t i = 0; i < g.points(); ++i) prod.values[i] = std::norm(f.values[i]);
      CHECK(std::abs(quadrature(prod) - 1.0) < 1e-8);
    }
}

TEST_CASE("Hermite derivatives match central differences") {
  for (double scale : {0.5, 1.0, 2.0})
    for (int k : {0, 1, 5, 15}) {
      const auto psi = TestFunction::hermite(k, scale);
      const double h = 1e-5;
      for (double x : {-3.2, -0.7, 0.0, 1.1, 4.9}) {
        const double d1 = ((psi(x + h) - psi(x - h)) / (2.0 * h)).real();
        const double d2 = ((psi(x + h) - 2.0 * psi(x) + psi(x - h)) / (h * h)).real();
        CHECK(std::abs(psi.deriv1(x).real() - d1) < 1e-6);
        CHECK(std::abs(psi.deriv2(x).real() - d2) < 1e-4);
      }
    }
}

TEST_CASE("Hermite functions are transform eigenfunctions with unit-modulus ratio i^k") {
  const Grid g(20.0, 1024);
  for (double scale : {0.5, 1.0, 2.0})
    for (int k : {0, 1, 2, 5, 14}) {
      const auto psi = TestFunction::hermite(k, scale);
      const auto F = forward_ft(on_grid(psi, g));
      double err = 0.0;
      for (std::size_t i = 0; i < F.grid.points(); ++i) {
        const double s = F.grid.node(i);
        if (std::abs(s) > 10.0) continue;
        err = std::max(err, std::abs(F.values[i] - psi.ft(s)));
      }
      CHECK(err < 1e-8);
    }
}

TEST_CASE("decay check is boundary-relative") {
  // Wide high-order test functions genuinely violate |x|^8 |psi| < 1e-6 at
  // x = 20 but pass at 40; the default set is certified at 40.
  CHECK_FALSE(decays_rapidly(TestFunction::hermite(15, 2.0), 20.0));
  CHECK(decays_rapidly(TestFunction::hermite(15, 2.0), 40.0));
  CHECK(decays_rapidly(TestFunction::hermite(3, 1.0), 20.0));
  for (const auto& psi : default_test_set()) CHECK(decays_rapidly(psi, 40.0));
}

TEST_CASE("default test set holds 16 orders at three scales") {
  const auto set = default_test_set();
  CHECK(set.size() == 48);
  CHECK(hermite_test_set(16, 1.0).size() == 16);
  CHECK_THROWS_AS(hermite_test_set(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::hermite(-1), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::hermite(2, 0.0), std::invalid_argument);
}

TEST_CASE("custom test functions reject missing evaluators") {
  const auto psi = TestFunction::custom([](double x) { return cplx(std::exp(-x * x)); });
  CHECK(std::abs(psi(0.0) - cplx(1.0)) < 1e-15);
  CHECK_THROWS_AS(psi.deriv1(0.0), std::invalid_argument);
  CHECK_THROWS_AS(psi.ft(0.0), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::custom(nullptr), std::invalid_argument);
}
