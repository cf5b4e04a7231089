#include "gfdeconv/random_gf.hpp"

#include <cmath>
#include <stdexcept>

#include "gfdeconv/errors.hpp"
#include "gfdeconv/rng.hpp"

namespace gfd {

namespace {

// Half-line truncation: wide enough for the slowest-decaying Hermite in
// either argument (support ~ scale * sqrt(2k+1), transform side ~ 1/scale).
double integration_limit(const TestFunction& a, const TestFunction& b) {
  auto reach = [](const TestFunction& t) {
    if (t.kind() == TestFunction::Kind::hermite)
      return std::max(t.scale(), 1.0 / t.scale());
    return 1.0;
  };
  return 40.0 * std::max(reach(a), reach(b));
}

cplx eval(CovarianceKind kind, const TestFunction& psi, double t) {
  return kind == CovarianceKind::wiener_derivative ? psi(t) : psi.ft(t);
}

// In-place lower Cholesky of a Hermitian matrix, row-major.
void cholesky(std::vector<cplx>& a, std::size_t m) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cplx sum = a[i * m + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * m + k] * std::conj(a[j * m + k]);
      if (i == j) {
        const double d = sum.real();
        if (d <= 0.0 || !std::isfinite(d))
          throw SolverRejection("sample_process: covariance Gram matrix is not PSD after jitter");
        a[i * m + i] = std::sqrt(d);
      } else {
        a[i * m + j] = sum / a[j * m + j].real();
      }
    }
    for (std::size_t j = i + 1; j < m; ++j) a[i * m + j] = cplx{};
  }
}

}  // namespace

cplx wiener_covariance(CovarianceKind kind, const TestFunction& psi1, const TestFunction& psi2) {
  const double limit = integration_limit(psi1, psi2);
  const std::size_t segments = 1u << 14;  // composite Simpson, even count
  const double h = limit / static_cast<double>(segments);
  cplx sum{};
  for (std::size_t q = 0; q <= segments; ++q) {
    const double t = h * static_cast<double>(q);
    double w = (q == 0 || q == segments) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
    sum += w * eval(kind, psi1, t) * std::conj(eval(kind, psi2, t));
  }
  return sum * (h / 3.0);
}

std::vector<cplx> covariance_gram(CovarianceKind kind, std::span<const TestFunction> test_set) {
  const std::size_t m = test_set.size();
  if (m == 0) throw std::invalid_argument("covariance_gram: test set must be non-empty");
  std::vector<cplx> gram(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const cplx v = wiener_covariance(kind, test_set[i], test_set[j]);
      gram[i * m + j] = v;
      gram[j * m + i] = std::conj(v);
    }
  return gram;
}

std::vector<cplx> sample_process(CovarianceKind kind, std::span<const TestFunction> test_set,
                                 std::uint64_t seed) {
  const std::size_t m = test_set.size();
  std::vector<cplx> chol = covariance_gram(kind, test_set);
  for (std::size_t i = 0; i < m; ++i) chol[i * m + i] += 1e-12;
  cholesky(chol, m);

  Rng rng(seed);
  std::vector<cplx> xi(m);
  if (kind == CovarianceKind::wiener_derivative) {
    for (auto& v : xi) v = cplx(rng.normal(), 0.0);
  } else {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (auto& v : xi) v = cplx(rng.normal() * inv_sqrt2, rng.normal() * inv_sqrt2);
  }
  std::vector<cplx> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    cplx sum{};
    for (std::size_t k = 0; k <= i; ++k) sum += chol[i * m + k] * xi[k];
    out[i] = sum;
  }
  return out;
}

}  // namespace gfd
