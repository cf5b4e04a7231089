#include "gfdeconv/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "gfdeconv/fourier.hpp"

namespace gfd {

namespace {

void check_same_freq_grid(const GriddedFunction& a, const GriddedFunction& b, const char* who) {
  if (!same_grid(a.grid, b.grid))
    throw std::invalid_argument(std::string(who) + ": operands must share one frequency grid");
}

// Path integrals I(s) = int_0^s sum_k kappa_k dt_k for every window node,
// with complex accumulators (the fields are complex; dropping the imaginary
// part would corrupt the phase of exp(I)). 1-d: cumulative trapezoid
// outward from the origin. 2-d: straight segment 0 -> s sampled at grid
// resolution with bilinear interpolation.
std::vector<cplx> path_integrals(const std::vector<GriddedFunction>& kappas,
                                 const SupportWindow& w) {
  const Grid& g = w.grid;
  std::vector<cplx> integral(g.size(), cplx{});
  if (g.dim() == 1) {
    const auto& k1 = kappas[0].values;
    const std::size_t c = g.origin_index();
    const double half_step = 0.5 * g.spacing();
    cplx acc{};
    for (std::size_t k = c + 1; k <= w.hi; ++k) {
      acc += half_step * (k1[k - 1] + k1[k]);
      integral[k] = acc;
    }
    acc = cplx{};
    for (std::size_t k = c; k-- > w.lo;) {
      acc -= half_step * (k1[k] + k1[k + 1]);
      integral[k] = acc;
    }
    return integral;
  }

  const std::size_t n = g.points();
  const double lo = -g.half_width();
  const double step = g.spacing();
  auto bilinear = [&](const std::vector<cplx>& field, double a, double b) {
    double ua = (a - lo) / step, ub = (b - lo) / step;
    ua = std::clamp(ua, 0.0, static_cast<double>(n - 1));
    ub = std::clamp(ub, 0.0, static_cast<double>(n - 1));
    const auto ia = std::min(static_cast<std::size_t>(ua), n - 2);
    const auto ib = std::min(static_cast<std::size_t>(ub), n - 2);
    const double fa = ua - static_cast<double>(ia), fb = ub - static_cast<double>(ib);
    return (1.0 - fa) * ((1.0 - fb) * field[ia * n + ib] + fb * field[ia * n + ib + 1]) +
           fa * ((1.0 - fb) * field[(ia + 1) * n + ib] + fb * field[(ia + 1) * n + ib + 1]);
  };
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!w.inside[idx]) continue;
    const double sa = g.node(idx / n), sb = g.node(idx % n);
    const double dist = std::hypot(sa, sb);
    if (dist == 0.0) continue;
    const auto segments = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(dist / step)));
    cplx acc{};
    cplx prev = bilinear(kappas[0].values, 0.0, 0.0) * sa + bilinear(kappas[1].values, 0.0, 0.0) * sb;
    for (std::size_t q = 1; q <= segments; ++q) {
      const double t = static_cast<double>(q) / static_cast<double>(segments);
      const cplx cur =
          bilinear(kappas[0].values, t * sa, t * sb) * sa + bilinear(kappas[1].values, t * sa, t * sb) * sb;
      acc += 0.5 * (prev + cur) / static_cast<double>(segments);
      prev = cur;
    }
    integral[idx] = acc;
  }
  return integral;
}

void check_window_fields(const std::vector<GriddedFunction>& kappas, const SupportWindow& w,
                         const char* who) {
  if (kappas.size() != static_cast<std::size_t>(w.grid.dim()))
    throw std::invalid_argument(std::string(who) + ": need one field per grid axis");
  for (const auto& k : kappas)
    if (!same_grid(k.grid, w.grid))
      throw std::invalid_argument(std::string(who) + ": field grid differs from the window grid");
}

// Least-squares cubic through (x_i, y_i), abscissae centered and scaled to
// O(1) for conditioning; returns the four coefficients in the scaled frame.
struct CubicFit {
  double x0 = 0.0, scale = 1.0;
  std::array<cplx, 4> coef{};

  cplx operator()(double x) const {
    const double u = (x - x0) / scale;
    return coef[0] + u * (coef[1] + u * (coef[2] + u * coef[3]));
  }
};

CubicFit fit_cubic(const std::vector<double>& xs, const std::vector<cplx>& ys) {
  CubicFit fit;
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  fit.x0 = 0.5 * (*mn + *mx);
  fit.scale = std::max(0.5 * (*mx - *mn), 1e-300);

  // Normal equations A^T A c = A^T y for the scaled Vandermonde matrix.
  double ata[4][4] = {};
  cplx aty[4] = {};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = (xs[i] - fit.x0) / fit.scale;
    double pow_u[4] = {1.0, u, u * u, u * u * u};
    for (int r = 0; r < 4; ++r) {
      aty[r] += pow_u[r] * ys[i];
      for (int c = 0; c < 4; ++c) ata[r][c] += pow_u[r] * pow_u[c];
    }
  }
  // Gaussian elimination with partial pivoting on the 4x4 system.
  cplx rhs[4];
  for (int r = 0; r < 4; ++r) rhs[r] = aty[r];
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(ata[r][col]) > std::abs(ata[pivot][col])) pivot = r;
    std::swap(ata[col], ata[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    if (ata[col][col] == 0.0)
      throw SolverRejection("divide_with_zeros: degenerate interpolation stencil");
    for (int r = col + 1; r < 4; ++r) {
      const double f = ata[r][col] / ata[col][col];
      for (int c = col; c < 4; ++c) ata[r][c] -= f * ata[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = 3; r >= 0; --r) {
    cplx s = rhs[r];
    for (int c = r + 1; c < 4; ++c) s -= ata[r][c] * fit.coef[static_cast<std::size_t>(c)];
    fit.coef[static_cast<std::size_t>(r)] = s / ata[r][r];
  }
  return fit;
}

}  // namespace

void validate(const SolverConfig& cfg, int dim) {
  if (!(cfg.zeta > 0.0) || !std::isfinite(cfg.zeta))
    throw std::invalid_argument("SolverConfig: zeta must be positive and finite");
  if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau))
    throw std::invalid_argument("SolverConfig: tau must be positive and finite");
  if (cfg.cutoff && !(*cfg.cutoff > 0.0))
    throw std::invalid_argument("SolverConfig: cutoff must be positive when present");
  if (!std::isfinite(cfg.c.real()) || !std::isfinite(cfg.c.imag()) || cfg.c == cplx{})
    throw std::invalid_argument("SolverConfig: c must be finite and nonzero");
  validate(cfg.bound, dim);
}

double default_zeta(std::size_t n) {
  if (n < 2) throw std::invalid_argument("default_zeta: need n >= 2");
  const double nn = static_cast<double>(n);
  return 4.0 * std::log(nn) / std::sqrt(nn);
}

SupportWindow support_window(const GriddedFunction& eps1, double zeta) {
  if (!(zeta > 0.0) || !std::isfinite(zeta))
    throw std::invalid_argument("support_window: zeta must be positive and finite");
  const Grid& g = eps1.grid;
  const std::size_t n = g.points();
  const std::size_t c = g.origin_index();
  const std::size_t origin = g.dim() == 1 ? c : c * n + c;
  if (std::abs(eps1.values[origin]) < zeta)
    throw SolverRejection("support_window: spectrum at the origin is below the threshold");

  SupportWindow w{g, std::vector<std::uint8_t>(g.size(), 0),
                  std::vector<std::uint8_t>(g.size(), 0), 0, 0, 0};
  if (g.dim() == 1) {
    std::size_t hi = c;
    while (hi + 1 < n && std::abs(eps1.values[hi + 1]) >= zeta) ++hi;
    std::size_t lo = c;
    while (lo > 0 && std::abs(eps1.values[lo - 1]) >= zeta) --lo;
    for (std::size_t k = lo; k <= hi; ++k) w.inside[k] = 1;
    w.lo = lo;
    w.hi = hi;
    w.count = hi - lo + 1;
    w.boundary[lo] = 1;
    w.boundary[hi] = 1;
    return w;
  }

  // 2-d: breadth-first flood over 4-adjacency from the origin node.
  std::deque<std::size_t> queue{origin};
  w.inside[origin] = 1;
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    ++w.count;
    const std::size_t a = idx / n, b = idx % n;
    const std::size_t neighbors[4] = {
        a > 0 ? idx - n : idx, a + 1 < n ? idx + n : idx,
        b > 0 ? idx - 1 : idx, b + 1 < n ? idx + 1 : idx};
    for (std::size_t nb : neighbors) {
      if (nb == idx || w.inside[nb]) continue;
      if (std::abs(eps1.values[nb]) >= zeta) {
        w.inside[nb] = 1;
        queue.push_back(nb);
      }
    }
  }
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!w.inside[idx]) continue;
    const std::size_t a = idx / n, b = idx % n;
    const bool edge = a == 0 || a + 1 == n || b == 0 || b + 1 == n;
    const bool open = (a > 0 && !w.inside[idx - n]) || (a + 1 < n && !w.inside[idx + n]) ||
                      (b > 0 && !w.inside[idx - 1]) || (b + 1 < n && !w.inside[idx + 1]);
    if (edge || open) w.boundary[idx] = 1;
  }
  return w;
}

GriddedFunction log_cf_derivative(const GriddedFunction& eps1, const GriddedFunction& eps1_deriv,
                                  const GriddedFunction& eps2, const SupportWindow& window) {
  check_same_freq_grid(eps1, eps1_deriv, "log_cf_derivative");
  check_same_freq_grid(eps1, eps2, "log_cf_derivative");
  if (!same_grid(eps1.grid, window.grid))
    throw std::invalid_argument("log_cf_derivative: window grid mismatch");
  GriddedFunction out{eps1.grid, std::vector<cplx>(eps1.values.size())};
  for (std::size_t k = 0; k < out.values.size(); ++k)
    if (window.inside[k])
      out.values[k] = (eps1_deriv.values[k] - cplx(0.0, 1.0) * eps2.values[k]) / eps1.values[k];
  return out;
}

PhiInverseResult phi_inverse_estimate(const std::vector<GriddedFunction>& kappas,
                                      const SupportWindow& window, const PolyBound& bound) {
  check_window_fields(kappas, window, "phi_inverse_estimate");
  validate(bound, window.grid.dim());
  if (bound.V < 1.0)
    throw std::invalid_argument(
        "phi_inverse_estimate: the envelope must admit the normalization value 1 at the origin");
  const Grid& g = window.grid;
  const std::size_t origin =
      g.dim() == 1 ? g.origin_index() : g.origin_index() * g.points() + g.origin_index();
  if (!window.inside[origin])
    throw SolverRejection("phi_inverse_estimate: window excludes the origin");

  const auto integral = path_integrals(kappas, window);
  GriddedFunction raw{g, std::vector<cplx>(g.size())};
  for (std::size_t k = 0; k < raw.values.size(); ++k)
    if (window.inside[k]) raw.values[k] = std::exp(-integral[k]);

  PhiInverseResult out{clip_to_bound(raw, bound), 0.0};
  std::size_t moved = 0;
  for (std::size_t k = 0; k < raw.values.size(); ++k)
    if (window.inside[k] && out.values.values[k] != raw.values[k]) ++moved;
  out.clipped_fraction = static_cast<double>(moved) / static_cast<double>(window.count);
  return out;
}

GriddedFunction reconstruct_gamma(const GriddedFunction& eps1,
                                  const std::vector<GriddedFunction>& eps2,
                                  const SupportWindow& window, cplx c) {
  if (c == cplx{} || !std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw std::invalid_argument("reconstruct_gamma: c must be finite and nonzero");
  check_window_fields(eps2, window, "reconstruct_gamma");
  if (!same_grid(eps1.grid, window.grid))
    throw std::invalid_argument("reconstruct_gamma: window grid mismatch");
  const Grid& g = window.grid;
  const std::size_t origin =
      g.dim() == 1 ? g.origin_index() : g.origin_index() * g.points() + g.origin_index();
  if (!window.inside[origin])
    throw SolverRejection("reconstruct_gamma: window excludes the origin");

  std::vector<GriddedFunction> kappas;
  kappas.reserve(eps2.size());
  for (const auto& e2 : eps2) {
    GriddedFunction k{g, std::vector<cplx>(g.size())};
    for (std::size_t j = 0; j < k.values.size(); ++j)
      if (window.inside[j]) k.values[j] = cplx(0.0, 1.0) * e2.values[j] / eps1.values[j];
    kappas.push_back(std::move(k));
  }
  const auto integral = path_integrals(kappas, window);
  GriddedFunction out{g, std::vector<cplx>(g.size())};
  for (std::size_t k = 0; k < out.values.size(); ++k)
    if (window.inside[k]) out.values[k] = c * std::exp(integral[k]);
  return out;
}

GriddedFunction divide_with_zeros(const GriddedFunction& eps, const GriddedFunction& phi,
                                  double tau) {
  check_same_freq_grid(eps, phi, "divide_with_zeros");
  if (eps.grid.dim() != 1)
    throw std::invalid_argument("divide_with_zeros: one-dimensional grids only");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("divide_with_zeros: tau must be positive and finite");
  const std::size_t n = eps.values.size();
  std::vector<std::uint8_t> valid(n);
  for (std::size_t k = 0; k < n; ++k) valid[k] = std::abs(phi.values[k]) >= tau ? 1 : 0;

  GriddedFunction out{eps.grid, std::vector<cplx>(n)};
  for (std::size_t k = 0; k < n; ++k)
    if (valid[k]) out.values[k] = eps.values[k] / phi.values[k];

  const auto max_band = static_cast<std::size_t>(0.05 * static_cast<double>(n));
  std::size_t k = 0;
  while (k < n) {
    if (valid[k]) {
      ++k;
      continue;
    }
    std::size_t band_end = k;
    while (band_end + 1 < n && !valid[band_end + 1]) ++band_end;
    if (band_end - k + 1 > max_band)
      throw SolverRejection("divide_with_zeros: zero band wider than 5% of the grid");

    // Nearest four valid nodes on each side of the band.
    std::vector<double> xs;
    std::vector<cplx> ys;
    for (std::size_t j = k; j-- > 0 && xs.size() < 4;)
      if (valid[j]) {
        xs.push_back(eps.grid.node(j));
        ys.push_back(out.values[j]);
      }
    const std::size_t left_count = xs.size();
    for (std::size_t j = band_end + 1; j < n && xs.size() < left_count + 4; ++j)
      if (valid[j]) {
        xs.push_back(eps.grid.node(j));
        ys.push_back(out.values[j]);
      }
    if (left_count == 0 || xs.size() == left_count || xs.size() < 4)
      throw SolverRejection("divide_with_zeros: zero band lacks valid neighbors to bridge it");

    const CubicFit fit = fit_cubic(xs, ys);
    for (std::size_t j = k; j <= band_end; ++j) out.values[j] = fit(eps.grid.node(j));
    k = band_end + 1;
  }
  return out;
}

GeneralizedFunction deconvolve_known_cf(const GriddedFunction& eps, const GriddedFunction& phi,
                                        const SolverConfig& cfg) {
  check_same_freq_grid(eps, phi, "deconvolve_known_cf");
  if (eps.grid.dim() != 1)
    throw std::invalid_argument("deconvolve_known_cf: one-dimensional grids only");
  validate(cfg, eps.grid.dim());

  std::size_t below = 0;
  for (const cplx& v : phi.values)
    if (std::abs(v) < cfg.tau) ++below;
  if (2 * below > phi.values.size())
    throw SolverRejection(
        "deconvolve_known_cf: |phi| below tau on more than half the grid (degenerate inversion)");

  GriddedFunction ratio{eps.grid, std::vector<cplx>(eps.values.size())};
  if (below == 0) {
    for (std::size_t k = 0; k < ratio.values.size(); ++k)
      ratio.values[k] = eps.values[k] / phi.values[k];
  } else {
    ratio = divide_with_zeros(eps, phi, cfg.tau);
  }
  if (cfg.cutoff) ratio = spectral_cutoff(ratio, *cfg.cutoff);
  return GeneralizedFunction::from_regular(inverse_ft(ratio));
}

GriddedFunction spectral_cutoff(const GriddedFunction& eps, double T) {
  if (!(T > 0.0) || !std::isfinite(T))
    throw std::invalid_argument("spectral_cutoff: T must be positive and finite");
  GriddedFunction out = eps;
  const Grid& g = eps.grid;
  if (g.dim() == 1) {
    for (std::size_t k = 0; k < out.values.size(); ++k)
      if (!(std::abs(g.node(k)) < T)) out.values[k] = cplx{};
  } else {
    const std::size_t n = g.points();
    for (std::size_t k = 0; k < out.values.size(); ++k) {
      const double r = std::max(std::abs(g.node(k / n)), std::abs(g.node(k % n)));
      if (!(r < T)) out.values[k] = cplx{};
    }
  }
  return out;
}

SystemSolution solve_system(const SpectralEstimates& est, const SolverConfig& cfg) {
  const Grid& g = est.eps1.grid;
  validate(cfg, g.dim());
  const auto axes = static_cast<std::size_t>(g.dim());
  if (est.eps1_deriv.size() != axes || est.eps2.size() != axes)
    throw std::invalid_argument("solve_system: need one derivative and one eps2 field per axis");

  GriddedFunction eps1 = cfg.cutoff ? spectral_cutoff(est.eps1, *cfg.cutoff) : est.eps1;
  std::vector<GriddedFunction> derivs, eps2s;
  for (std::size_t k = 0; k < axes; ++k) {
    derivs.push_back(cfg.cutoff ? spectral_cutoff(est.eps1_deriv[k], *cfg.cutoff)
                                : est.eps1_deriv[k]);
    eps2s.push_back(cfg.cutoff ? spectral_cutoff(est.eps2[k], *cfg.cutoff) : est.eps2[k]);
  }

  SupportWindow window = support_window(eps1, cfg.zeta);
  if (window.count < 5)
    throw SolverRejection("solve_system: support window is degenerate (fewer than 5 nodes)");

  std::vector<GriddedFunction> kappas;
  for (std::size_t k = 0; k < axes; ++k)
    kappas.push_back(log_cf_derivative(eps1, derivs[k], eps2s[k], window));
  PhiInverseResult pinv = phi_inverse_estimate(kappas, window, cfg.bound);

  GriddedFunction gamma{g, std::vector<cplx>(g.size())};
  GriddedFunction phi{g, std::vector<cplx>(g.size())};
  for (std::size_t k = 0; k < g.size(); ++k)
    if (window.inside[k]) {
      gamma.values[k] = pinv.values.values[k] * eps1.values[k];
      phi.values[k] = 1.0 / pinv.values.values[k];
    }
  GeneralizedFunction g_hat = GeneralizedFunction::from_regular(inverse_ft(gamma));
  if (!cfg.zero_outside_window) {
    const cplx nan{std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};
    for (std::size_t k = 0; k < g.size(); ++k)
      if (!window.inside[k]) {
        gamma.values[k] = nan;
        phi.values[k] = nan;
      }
  }

  SystemSolution out{std::move(g_hat), std::move(gamma), std::move(phi), std::move(window),
                     pinv.clipped_fraction, 0.0};
  out.masked_fraction =
      1.0 - static_cast<double>(out.window.count) / static_cast<double>(g.size());
  return out;
}

SystemSolution solve_system(std::span<const ModelSample> data, const KernelSpec& kspec,
                            const Grid& space_grid, const SolverConfig& cfg) {
  return solve_system(spectral_estimates(data, cfg.bound, kspec, space_grid), cfg);
}

}  // namespace gfd
