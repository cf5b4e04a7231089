// Random generalized functions: half-line covariance functionals with known
// closed forms, PSD Gram matrices, and seed-deterministic Gaussian draws.
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gfdeconv/errors.hpp"
#include "gfdeconv/random_gf.hpp"
#include "gfdeconv/test_function.hpp"

using namespace gfd;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("half-line covariance: closed forms for low Hermite orders") {
  const auto h0 = TestFunction::hermite(0);
  const auto h1 = TestFunction::hermite(1);
  const auto h2 = TestFunction::hermite(2);

  // int_0^inf h0^2 = 1/2 by symmetry and unit norm.
  CHECK(std::abs(wiener_covariance(CovarianceKind::wiener_derivative, h0, h0) - 0.5) < 1e-8);
  // h1 = sqrt(2) t h0, so int_0^inf h0 h1 = sqrt(2/pi) int_0^inf t e^{-t^2}
  //                                       = 1/sqrt(2 pi).
  CHECK(std::abs(wiener_covariance(CovarianceKind::wiener_derivative, h0, h1) -
                 1.0 / std::sqrt(2.0 * kPi)) < 1e-8);
  // h2 is proportional to (2t^2 - 1) h0 and the half-line moments cancel.
  CHECK(std::abs(wiener_covariance(CovarianceKind::wiener_derivative, h0, h2)) < 1e-8);
}

TEST_CASE("half-line covariance on the transform side") {
  // Ft h0 = sqrt(2 pi) h0, so the transform-side variance is 2 pi * 1/2.
  const auto h0 = TestFunction::hermite(0);
  CHECK(std::abs(wiener_covariance(CovarianceKind::ft_wiener_derivative, h0, h0) - kPi) < 1e-7);
}

TEST_CASE("half-line covariance of a custom Gaussian profile") {
  const auto g = TestFunction::custom([](double t) { return std::exp(-0.5 * t * t); });
  const cplx v = wiener_covariance(CovarianceKind::wiener_derivative, g, g);
  CHECK(std::abs(v - std::sqrt(kPi) / 2.0) < 1e-8);
}

TEST_CASE("profiles supported on disjoint half-line windows decorrelate") {
  auto bump = [](double center) {
    return TestFunction::custom([center](double t) {
      const double u = std::abs(t - center);
      return u < 0.5 ? (0.5 - u) : 0.0;
    });
  };
  const cplx v = wiener_covariance(CovarianceKind::wiener_derivative, bump(1.5), bump(3.5));
  CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("Gram matrix is Hermitian and positive semidefinite") {
  const auto set = hermite_test_set(6, 1.0);
  const auto gram = covariance_gram(CovarianceKind::wiener_derivative, set);
  const std::size_t m = set.size();
  REQUIRE(gram.size() == m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      CHECK(std::abs(gram[i * m + j] - std::conj(gram[j * m + i])) < 1e-14);

  // Positive quadratic forms: the quadrature has positive weights, so
  // x^H G x = sum_q w_q |<x, psi(t_q)>|^2 >= 0 up to rounding.
  std::uint64_t state = 12345;
  auto next = [&state]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  };
  for (int rep = 0; rep < 32; ++rep) {
    std::vector<cplx> x(m);
    for (auto& v : x) v = cplx(next(), next());
    cplx q{};
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        q += std::conj(x[i]) * gram[i * m + j] * x[j];
    CHECK(q.real() >= -1e-10);
    CHECK(std::abs(q.imag()) < 1e-10);
  }
}

TEST_CASE("draws are deterministic in the seed") {
  const auto set = hermite_test_set(4, 1.0);
  const auto a = sample_process(CovarianceKind::wiener_derivative, set, 99);
  const auto b = sample_process(CovarianceKind::wiener_derivative, set, 99);
  const auto c = sample_process(CovarianceKind::wiener_derivative, set, 100);
  CHECK(a == b);
  CHECK(a != c);
  REQUIRE(a.size() == set.size());
  // Process-side draws are real; transform-side draws are circular complex.
  for (const cplx& v : a) CHECK(v.imag() == 0.0);
  const auto f = sample_process(CovarianceKind::ft_wiener_derivative, set, 99);
  bool any_imag = false;
  for (const cplx& v : f) any_imag = any_imag || v.imag() != 0.0;
  CHECK(any_imag);
}

TEST_CASE("sample variance of the first functional matches the covariance") {
  // (b, h0) ~ N(0, 1/2); the mean of 10^4 squared draws stays within three
  // Monte Carlo standard errors (se = sqrt(2 * 0.25 / 1e4) ~ 7.1e-3).
  const std::vector<TestFunction> set{TestFunction::hermite(0)};
  double sum_sq = 0.0;
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    const auto v = sample_process(CovarianceKind::wiener_derivative, set, 5000 + r);
    sum_sq += v[0].real() * v[0].real();
  }
  const double var = sum_sq / reps;
  CHECK(std::abs(var - 0.5) < 3.0 * std::sqrt(2.0 * 0.25 / reps));
}

TEST_CASE("nearly dependent directions draw nearly identical values") {
  // Duplicating a test function makes the Gram singular up to jitter; the
  // Cholesky still succeeds and the duplicate coordinate tracks the original.
  const auto h0 = TestFunction::hermite(0);
  const auto copy = TestFunction::custom([h0](double t) { return h0(t); });
  const std::vector<TestFunction> set{h0, copy};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = sample_process(CovarianceKind::wiener_derivative, set, seed);
    CHECK(std::abs(v[1] - v[0]) < 1e-4);
  }
}

TEST_CASE("empty test set is rejected") {
  CHECK_THROWS_AS(covariance_gram(CovarianceKind::wiener_derivative, {}),
                  std::invalid_argument);
}
