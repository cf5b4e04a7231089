#include "doctest.h"

#include <cmath>
#include <numbers>

#include "gfdeconv/fourier.hpp"
#include "gfdeconv/generalized.hpp"
#include "gfdeconv/grid.hpp"
#include "gfdeconv/test_function.hpp"

using namespace gfd;

namespace {

constexpr double kPi = std::numbers::pi;

double gauss_density(double x, double mean = 0.0, double var = 1.0) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * kPi * var);
}

double laplace_density(double x) { return 0.5 * std::exp(-std::abs(x)); }

const Grid kGrid(20.0, 1024);

}  // namespace

TEST_CASE("generalized function construction validates invariants") {
  CHECK_THROWS_AS(GeneralizedFunction::from_atoms({}), std::invalid_argument);
  CHECK_THROWS_AS(GeneralizedFunction::dirac(0.0, 1.0, 3), std::invalid_argument);  // order cap
  CHECK_THROWS_AS(GeneralizedFunction::from_atoms({Atom{{0.0}, cplx(NAN, 0.0), {}}}),
                  std::invalid_argument);
  // atom outside the regular grid box
  GeneralizedFunction b = GeneralizedFunction::from_regular(
      tabulate(kGrid, [](double x) { return gauss_density(x); }));
  b.atoms.push_back(Atom{{25.0}, 1.0, {}});
  CHECK_THROWS_AS(validate(b), std::invalid_argument);
}

TEST_CASE("functional values: point mass, its derivative, and a Gaussian pairing") {
  const auto h0 = TestFunction::hermite(0);
  const cplx v = apply_functional(GeneralizedFunction::dirac(0.0), h0);
  CHECK(std::abs(v - cplx(std::pow(kPi, -0.25))) < 1e-14);  // psi(0)

  // odd first derivative of an even test function vanishes at 0
  const cplx d = apply_functional(GeneralizedFunction::dirac(0.0, 1.0, 1), h0);
  CHECK(std::abs(d) < 1e-14);

  // (N(0,1) density, e^{-x^2/2}) = 1/sqrt(2)
  const auto b = GeneralizedFunction::from_regular(
      tabulate(kGrid, [](double x) { return gauss_density(x); }));
  const auto psi = TestFunction::custom([](double x) { return cplx(std::exp(-0.5 * x * x)); });
  CHECK(std::abs(apply_functional(b, psi) - cplx(1.0 / std::sqrt(2.0))) < 1e-8);
}

TEST_CASE("functional of an atom-free input equals the plain quadrature pairing") {
  const auto f = tabulate(kGrid, [](double x) { return laplace_density(x); });
  const auto psi = TestFunction::hermite(4, 2.0);
  GriddedFunction prod(kGrid);
  for (std::size_t j = 0; j < kGrid.points(); ++j)
    prod.values[j] = f.values[j] * std::conj(psi(kGrid.node(j)));
  const cplx direct = quadrature(prod);
  const cplx viafn = apply_functional(GeneralizedFunction::from_regular(f), psi);
  CHECK(std::abs(direct - viafn) < 1e-14);
}

TEST_CASE("functional rejects derivative orders the test function cannot serve") {
  const auto psi = TestFunction::custom([](double x) { return cplx(std::exp(-x * x)); });
  CHECK_THROWS_AS(apply_functional(GeneralizedFunction::dirac(0.0, 1.0, 1), psi),
                  std::invalid_argument);
}

TEST_CASE("spectral image of a point mass at zero is the constant 1") {
  const auto F = ft_generalized(GeneralizedFunction::dirac(0.0), kGrid.dual());
  for (const auto& v : F.values) CHECK(std::abs(v - cplx(1.0)) < 1e-14);
}

TEST_CASE("spectral image of a shifted point mass carries the phase e^{i a s}") {
  const auto F = ft_generalized(GeneralizedFunction::dirac(1.0), kGrid.dual());
  // s = pi is exactly 20 frequency steps right of the origin node
  const std::size_t k = F.grid.origin_index() + 20;
  REQUIRE(std::abs(F.grid.node(k) - kPi) < 1e-12);
  CHECK(std::abs(F.values[k] - cplx(-1.0)) < 1e-12);
}

TEST_CASE("spectral image of a regular Gaussian is its characteristic function") {
  const auto b = GeneralizedFunction::from_regular(
      tabulate(kGrid, [](double x) { return gauss_density(x); }));
  const auto F = ft_generalized(b);
  double err = 0.0;
  for (std::size_t k = 0; k < F.grid.points(); ++k) {
    const double s = F.grid.node(k);
    if (std::abs(s) > 10.0) continue;
    err = std::max(err, std::abs(F.values[k] - cplx(std::exp(-0.5 * s * s))));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("transform duality against test functions, including the reflected exact form") {
  // With the conjugate-linear pairing the exact identity is
  // (Ft b, psi) = (b, reflect(Ft psi)); the unreflected form holds for even
  // test functions, whose transforms are symmetric.
  std::vector<GeneralizedFunction> corpus;
  corpus.push_back(GeneralizedFunction::from_regular(
      tabulate(kGrid, [](double x) { return gauss_density(x, 0.4); })));
  corpus.push_back(GeneralizedFunction::dirac(0.7, cplx(0.8, 0.3)));
  corpus.push_back(GeneralizedFunction::dirac(-0.3, 1.0, 1));
  {
    GeneralizedFunction mix = GeneralizedFunction::from_regular(
        tabulate(kGrid, [](double x) { return 0.5 * gauss_density(x); }));
    mix.atoms.push_back(Atom{{0.0}, 0.5, {}});
    corpus.push_back(mix);
  }

  for (const auto& b : corpus) {
    const auto Fb = GeneralizedFunction::from_regular(ft_generalized(b, kGrid.dual()));
    for (int k : {0, 1, 2, 3, 6, 11}) {
      for (double scale : {0.5, 1.0, 2.0}) {
        const auto psi = TestFunction::hermite(k, scale);
        const auto reflected_ft = TestFunction::custom(
            [psi](double x) { return psi.ft(-x); },
            [psi](double x) {
              // d/dx [Ftpsi(-x)] via a central difference on the transform
              const double h = 1e-6;
              return (psi.ft(-x - h) - psi.ft(-x + h)) / (2.0 * h);
            });
        const cplx lhs = apply_functional(Fb, psi);
        const cplx rhs = apply_functional(b, reflected_ft);
        CHECK(std::abs(lhs - rhs) < 1e-6);
        if (k % 2 == 0) {
          const auto ft_psi = TestFunction::custom(
              [psi](double x) { return psi.ft(x); },
              [psi](double x) {
                const double h = 1e-6;
                return (psi.ft(x + h) - psi.ft(x - h)) / (2.0 * h);
              });
          CHECK(std::abs(lhs - apply_functional(b, ft_psi)) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("convolution: point mass at zero is the identity") {
  const auto f = GeneralizedFunction::from_regular(
      tabulate(kGrid, [](double x) { return laplace_density(x); }));
  const auto w = convolve_gf(GeneralizedFunction::dirac(0.0), f);
  REQUIRE(w.regular.has_value());
  CHECK(w.atoms.empty());
  double err = 0.0;
  for (std::size_t j = 0; j < kGrid.points(); ++j)
    err = std::max(err, std::abs(w.regular->values[j] - f.regular->values[j]));
  CHECK(err < 1e-10);
}

TEST_CASE("convolution: shifted point mass translates a Gaussian") {
  const auto f = GeneralizedFunction::from_regular(
      tabulate(kGrid, [](double x) { return gauss_density(x); }));
  const auto w = convolve_gf(GeneralizedFunction::dirac(1.0), f);
  double err = 0.0;
  for (std::size_t j = 0; j < kGrid.points(); ++j)
    err = std::max(err, std::abs(w.regular->values[j] - cplx(gauss_density(kGrid.node(j), 1.0))));
  CHECK(err < 1e-8);
}

TEST_CASE("convolution: derivative atom differentiates the smooth operand") {
  // delta' * f = f', which pins the sign of the atom spectral image (-is)^order.
  const auto f = GeneralizedFunction::from_regular(
      tabulate(kGrid, [](double x) { return gauss_density(x); }));
  const auto w = convolve_gf(GeneralizedFunction::dirac(0.0, 1.0, 1), f);
  double err = 0.0;
  for (std::size_t j = 0; j < kGrid.points(); ++j) {
    const double x = kGrid.node(j);
    err = std::max(err, std::abs(w.regular->values[j] - cplx(-x * gauss_density(x))));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("convolution: mixture with an atom against a Laplace density") {
  GeneralizedFunction mix = GeneralizedFunction::from_regular(
      tabulate(kGrid, [](double x) { return 0.5 * gauss_density(x); }));
  mix.atoms.push_back(Atom{{0.0}, 0.5, {}});
  const auto f = GeneralizedFunction::from_regular(
      tabulate(kGrid, [](double x) { return laplace_density(x); }));
  const auto w = convolve_gf(mix, f);

  // brute-force quadrature oracle: w(x) = 0.5 lap(x) + 0.5 (gauss * lap)(x)
  double err = 0.0;
  const double dx = kGrid.spacing();
  for (std::size_t j = 0; j < kGrid.points(); j += 7) {
    const double x = kGrid.node(j);
    double conv = 0.0;
    for (std::size_t t = 0; t < kGrid.points(); ++t)
      conv += gauss_density(kGrid.node(t)) * laplace_density(x - kGrid.node(t));
    conv *= dx;
    const double truth = 0.5 * laplace_density(x) + 0.5 * conv;
    err = std::max(err, std::abs(w.regular->values[j] - cplx(truth)));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("convolution rejects unsupported operand combinations") {
  const auto a1 = GeneralizedFunction::dirac(0.0);
  const auto a2 = GeneralizedFunction::dirac(1.0);
  CHECK_THROWS_AS(convolve_gf(a1, a2), std::invalid_argument);
}

TEST_CASE("generalized density of a unit step is the point mass at the jump") {
  for (const auto& psi : default_test_set()) {
    const cplx lhs = step_derivative_functional(0.0, psi, kGrid);
    const cplx rhs = std::conj(psi(0.0));  // (delta_0, psi)
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}
