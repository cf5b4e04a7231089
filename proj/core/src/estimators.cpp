#include "gfdeconv/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include "gfdeconv/fourier.hpp"

namespace gfd {

namespace {

void check_kernel(const KernelSpec& kspec) {
  if (!(kspec.bandwidth > 0.0) || !std::isfinite(kspec.bandwidth))
    throw std::invalid_argument("KernelSpec: bandwidth must be positive and finite");
}

// Unit-magnitude phases e^{i s_k z} for every node of a 1-d frequency axis,
// by recurrence anchored at the s = 0 node so the origin value is exactly 1.
void phase_profile(double z, const Grid& freq_grid, std::vector<cplx>& out) {
  const std::size_t n = freq_grid.points();
  const std::size_t c = freq_grid.origin_index();
  out.resize(n);
  const cplx rot = std::polar(1.0, freq_grid.spacing() * z);
  cplx acc(1.0, 0.0);
  for (std::size_t k = c; k < n; ++k) {
    out[k] = acc;
    acc *= rot;
  }
  acc = std::conj(rot);
  for (std::size_t k = c; k-- > 0;) {
    out[k] = acc;
    acc *= std::conj(rot);
  }
}

std::size_t sample_count(std::span<const double> points, const Grid& freq_grid) {
  const auto d = static_cast<std::size_t>(freq_grid.dim());
  if (points.empty() || points.size() % d != 0)
    throw std::invalid_argument("ecf: need a non-empty row-major n x dim point list");
  return points.size() / d;
}

// Shared accumulation for the ECF and its analytic derivative: factor(j) is
// the per-sample multiplier (1 for the ECF, i z_{j,axis} for the derivative).
template <typename Factor>
GriddedFunction ecf_accumulate(std::span<const double> points, const Grid& freq_grid,
                               Factor factor) {
  const std::size_t n = sample_count(points, freq_grid);
  GriddedFunction out{freq_grid, std::vector<cplx>(freq_grid.size())};
  std::vector<cplx> pa, pb;
  if (freq_grid.dim() == 1) {
    for (std::size_t j = 0; j < n; ++j) {
      phase_profile(points[j], freq_grid, pa);
      const cplx f = factor(j);
      for (std::size_t k = 0; k < pa.size(); ++k) out.values[k] += f * pa[k];
    }
  } else {
    const std::size_t npts = freq_grid.points();
    for (std::size_t j = 0; j < n; ++j) {
      phase_profile(points[2 * j], freq_grid, pa);
      phase_profile(points[2 * j + 1], freq_grid, pb);
      const cplx f = factor(j);
      for (std::size_t a = 0; a < npts; ++a) {
        const cplx row = f * pa[a];
        for (std::size_t b = 0; b < npts; ++b) out.values[a * npts + b] += row * pb[b];
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& v : out.values) v *= inv_n;
  return out;
}

}  // namespace

KernelSpec default_bandwidth(std::span<const ModelSample> data, int dim, double c) {
  if (data.empty()) throw std::invalid_argument("default_bandwidth: empty sample");
  if (dim != 1 && dim != 2) throw std::invalid_argument("default_bandwidth: dim must be 1 or 2");
  if (!(c > 0.0)) throw std::invalid_argument("default_bandwidth: c must be positive");
  const double n = static_cast<double>(data.size());
  double mean = 0.0;
  for (const ModelSample& s : data) mean += s.z;
  mean /= n;
  double var = 0.0;
  for (const ModelSample& s : data) var += (s.z - mean) * (s.z - mean);
  const double sd = data.size() > 1 ? std::sqrt(var / (n - 1.0)) : 1.0;
  const double scale = sd > 0.0 ? sd : 1.0;
  return KernelSpec{c * scale * std::pow(n, -1.0 / (4.0 + dim))};
}

GriddedFunction ecf(std::span<const double> points, const Grid& freq_grid) {
  return ecf_accumulate(points, freq_grid, [](std::size_t) { return cplx(1.0, 0.0); });
}

GriddedFunction ecf_derivative(std::span<const double> points, const Grid& freq_grid, int axis) {
  if (axis < 0 || axis >= freq_grid.dim())
    throw std::invalid_argument("ecf_derivative: axis out of range");
  const auto d = static_cast<std::size_t>(freq_grid.dim());
  return ecf_accumulate(points, freq_grid, [&](std::size_t j) {
    return cplx(0.0, points[d * j + static_cast<std::size_t>(axis)]);
  });
}

NwResult nadaraya_watson(std::span<const ModelSample> data, Moment moment,
                         const Grid& eval_grid, const KernelSpec& kspec) {
  if (data.empty()) throw std::invalid_argument("nadaraya_watson: empty sample");
  if (eval_grid.dim() != 1)
    throw std::invalid_argument("nadaraya_watson: only one-dimensional designs are supported");
  check_kernel(kspec);
  const double h = kspec.bandwidth;
  const std::size_t n = data.size();

  // Sort the design once; windowed sums become prefix-sum differences.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&data](std::size_t a, std::size_t b) { return data[a].z < data[b].z; });
  std::vector<double> zs(n), prefix(n + 1, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const ModelSample& s = data[order[r]];
    zs[r] = s.z;
    prefix[r + 1] = prefix[r] + (moment == Moment::y ? s.y : s.x * s.y);
  }

  const std::size_t npts = eval_grid.points();
  NwResult out{GriddedFunction{eval_grid, std::vector<cplx>(npts)},
               std::vector<std::uint8_t>(npts, 0), 0};
  for (std::size_t k = 0; k < npts; ++k) {
    const double t = eval_grid.node(k);
    const auto lo = static_cast<std::size_t>(
        std::lower_bound(zs.begin(), zs.end(), t - h) - zs.begin());
    const auto hi = static_cast<std::size_t>(
        std::upper_bound(zs.begin(), zs.end(), t + h) - zs.begin());
    if (hi > lo) {
      out.values.values[k] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
      out.covered[k] = 1;
    } else {
      ++out.empty_windows;
    }
  }
  return out;
}

SpectralEstimates spectral_estimates(std::span<const ModelSample> data, const PolyBound& bound,
                                     const KernelSpec& kspec, const Grid& space_grid) {
  if (space_grid.dim() != 1)
    throw std::invalid_argument("spectral_estimates: only one-dimensional designs are supported");
  const NwResult w1 = nadaraya_watson(data, Moment::y, space_grid, kspec);
  const NwResult w2 = nadaraya_watson(data, Moment::xy, space_grid, kspec);
  const GriddedFunction w1_clipped = clip_to_bound(w1.values, bound);
  const GriddedFunction w2_clipped = clip_to_bound(w2.values, bound);

  std::size_t moved = 0;
  for (std::size_t k = 0; k < w1_clipped.values.size(); ++k)
    if (w1_clipped.values[k] != w1.values.values[k] ||
        w2_clipped.values[k] != w2.values.values[k])
      ++moved;

  SpectralEstimates out;
  out.eps1 = forward_ft(w1_clipped);
  out.eps1_deriv.push_back(spectral_derivative(out.eps1, 0));
  out.eps2.push_back(forward_ft(w2_clipped));
  const auto total = static_cast<double>(space_grid.size());
  out.clipped_fraction = static_cast<double>(moved) / total;
  out.masked_fraction = static_cast<double>(w1.empty_windows) / total;
  return out;
}

WeightedSincResult weighted_sinc_ft(std::span<const ModelSample> data, const KernelSpec& kspec,
                                    const Grid& freq_grid) {
  if (data.size() < 2)
    throw std::invalid_argument("weighted_sinc_ft: need at least two samples for the weights");
  if (freq_grid.dim() != 1)
    throw std::invalid_argument("weighted_sinc_ft: only one-dimensional designs are supported");
  check_kernel(kspec);
  const double h = kspec.bandwidth;

  std::vector<double> zs(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) zs[j] = data[j].z;
  std::sort(zs.begin(), zs.end());

  WeightedSincResult out{GriddedFunction{freq_grid, std::vector<cplx>(freq_grid.size())}, 0};
  std::vector<cplx> phases;
  for (const ModelSample& s : data) {
    const auto lo = std::lower_bound(zs.begin(), zs.end(), s.z - h);
    const auto hi = std::upper_bound(zs.begin(), zs.end(), s.z + h);
    const auto alpha = static_cast<std::size_t>(hi - lo) - 1;  // exclude the point itself
    if (alpha == 0) {
      ++out.skipped;
      continue;
    }
    phase_profile(s.z, freq_grid, phases);
    const double w = s.y / static_cast<double>(alpha);
    for (std::size_t k = 0; k < phases.size(); ++k) out.values.values[k] += w * phases[k];
  }
  for (std::size_t k = 0; k < freq_grid.points(); ++k) {
    const double hs = h * freq_grid.node(k);
    const double sinc = hs == 0.0 ? 1.0 : std::sin(hs) / hs;
    out.values.values[k] *= 2.0 * h * sinc;
  }
  return out;
}

}  // namespace gfd
