#include "gfdeconv/fourier.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

namespace gfd {

namespace {

constexpr double kPi = std::numbers::pi;

// Iterative radix-2 transform, unnormalized: a_k <- sum_j a_j e^{sign 2 pi i j k / n}.
void fft_pow2(std::vector<cplx>& a, bool positive_exponent) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<cplx> tw(n / 2);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const double base = (positive_exponent ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    for (std::size_t j = 0; j < half; ++j) tw[j] = std::polar(1.0, base * static_cast<double>(j));
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + half] * tw[j];
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
  }
}

double parity(std::size_t j) { return (j & 1) ? -1.0 : 1.0; }

// Apply the 1-d phase-corrected transform along both axes of a row-major
// N x N array: out_k = scale * (-1)^{k0+k1} sum_j (-1)^{j0+j1} a_j e^{sign ...}.
void transform_2d(std::vector<cplx>& a, std::size_t n, bool positive_exponent, double scale) {
  std::vector<cplx> col(n);
  for (std::size_t i0 = 0; i0 < n; ++i0) {
    for (std::size_t i1 = 0; i1 < n; ++i1) col[i1] = parity(i1) * a[i0 * n + i1];
    fft_pow2(col, positive_exponent);
    for (std::size_t i1 = 0; i1 < n; ++i1) a[i0 * n + i1] = parity(i1) * col[i1];
  }
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    for (std::size_t i0 = 0; i0 < n; ++i0) col[i0] = parity(i0) * a[i0 * n + i1];
    fft_pow2(col, positive_exponent);
    for (std::size_t i0 = 0; i0 < n; ++i0) a[i0 * n + i1] = scale * parity(i0) * col[i0];
  }
}

}  // namespace

bool boundary_negligible(const GriddedFunction& f, double rel_threshold) {
  double vmax = 0.0, bmax = 0.0;
  const Grid& g = f.grid;
  const double edge = 0.95 * g.half_width();
  const std::size_t n = g.points();
  if (g.dim() == 1) {
    for (std::size_t j = 0; j < n; ++j) {
      const double m = std::abs(f.values[j]);
      vmax = std::max(vmax, m);
      if (std::abs(g.node(j)) >= edge) bmax = std::max(bmax, m);
    }
  } else {
    for (std::size_t i0 = 0; i0 < n; ++i0)
      for (std::size_t i1 = 0; i1 < n; ++i1) {
        const double m = std::abs(f.at(i0, i1));
        vmax = std::max(vmax, m);
        if (std::max(std::abs(g.node(i0)), std::abs(g.node(i1))) >= edge) bmax = std::max(bmax, m);
      }
  }
  return vmax == 0.0 || bmax <= rel_threshold * vmax;
}

GriddedFunction forward_ft(const GriddedFunction& f) {
  const Grid& g = f.grid;
  const std::size_t n = g.points();
  GriddedFunction out(g.dual());
  out.values = f.values;
  if (g.dim() == 1) {
    for (std::size_t j = 0; j < n; ++j) out.values[j] *= parity(j);
    fft_pow2(out.values, /*positive_exponent=*/true);
    const double dx = g.spacing();
    for (std::size_t k = 0; k < n; ++k) out.values[k] *= dx * parity(k);
  } else {
    const double dx = g.spacing();
    transform_2d(out.values, n, /*positive_exponent=*/true, dx * dx);
  }
  return out;
}

GriddedFunction inverse_ft(const GriddedFunction& F) {
  const Grid& g = F.grid;
  const std::size_t n = g.points();
  GriddedFunction out(g.dual());
  out.values = F.values;
  const double scale = g.spacing() / (2.0 * kPi);  // per axis
  if (g.dim() == 1) {
    for (std::size_t k = 0; k < n; ++k) out.values[k] *= parity(k);
    fft_pow2(out.values, /*positive_exponent=*/false);
    for (std::size_t j = 0; j < n; ++j) out.values[j] *= scale * parity(j);
  } else {
    transform_2d(out.values, n, /*positive_exponent=*/false, scale * scale);
  }
  return out;
}

GriddedFunction convolve(const GriddedFunction& f, const GriddedFunction& g) {
  if (!same_grid(f.grid, g.grid)) throw std::invalid_argument("convolve: inputs must share a grid");
  for (const GriddedFunction* p : {&f, &g})
    if (!boundary_negligible(*p))
      std::fputs("warning: convolve: input is not negligible on the outer 5% of the grid (aliasing risk)\n",
                 stderr);
  GriddedFunction Ff = forward_ft(f);
  const GriddedFunction Fg = forward_ft(g);
  for (std::size_t i = 0; i < Ff.values.size(); ++i) Ff.values[i] *= Fg.values[i];
  GriddedFunction out = inverse_ft(Ff);
  out.grid = f.grid;  // dual() round trips can drift by an ulp
  return out;
}

GriddedFunction spectral_derivative(const GriddedFunction& g, int axis) {
  const int dim = g.grid.dim();
  if (axis < 0 || axis >= dim) throw std::invalid_argument("spectral_derivative: axis out of range");
  const std::size_t n = g.grid.points();
  const double h = g.grid.spacing();
  GriddedFunction out(g.grid);

  // stride walks along the differentiation axis; `lines` enumerates the rest.
  const std::size_t stride = (dim == 1) ? 1 : (axis == 0 ? n : 1);
  const std::size_t lines = (dim == 1) ? 1 : n;
  const std::size_t line_step = (dim == 1) ? 0 : (axis == 0 ? 1 : n);

  for (std::size_t l = 0; l < lines; ++l) {
    const std::size_t base = l * line_step;
    auto v = [&](std::size_t j) -> const cplx& { return g.values[base + j * stride]; };
    auto o = [&](std::size_t j) -> cplx& { return out.values[base + j * stride]; };
    o(0) = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
    for (std::size_t j = 1; j + 1 < n; ++j) o(j) = (v(j + 1) - v(j - 1)) / (2.0 * h);
    o(n - 1) = (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / (2.0 * h);
  }
  return out;
}

}  // namespace gfd
