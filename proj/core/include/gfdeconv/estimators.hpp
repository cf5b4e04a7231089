#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gfdeconv/bounds.hpp"
#include "gfdeconv/grid.hpp"

namespace gfd {

/// One observation of the errors-in-variables regression model: response y,
/// contaminated regressor x, and Berkson-type instrument z. The latent
/// pieces are carried along for simulation oracles only; estimators never
/// read them.
struct ModelSample {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double xstar = 0.0;
  double u = 0.0;
  double ux = 0.0;
  double uy = 0.0;
};

/// Indicator-kernel smoothing parameter: the kernel is fixed to the
/// indicator of the unit sphere, so a window of half-width `bandwidth`.
struct KernelSpec {
  double bandwidth = 0.0;  // must be positive
};

/// Rate-respecting default bandwidth c * sd(z) * n^{-1/(4+dim)}.
KernelSpec default_bandwidth(std::span<const ModelSample> data, int dim = 1, double c = 1.0);

/// Empirical characteristic function (1/n) sum_j exp(i s . z_j) on the
/// frequency grid; `points` is row-major n x dim for dim = freq_grid.dim().
GriddedFunction ecf(std::span<const double> points, const Grid& freq_grid);

/// Analytic partial derivative of the empirical characteristic function
/// along `axis`: (1/n) sum_j i z_{j,axis} exp(i s . z_j). No finite
/// differences are involved.
GriddedFunction ecf_derivative(std::span<const double> points, const Grid& freq_grid,
                               int axis = 0);

/// Which conditional moment the windowed mean targets.
enum class Moment { y, xy };

struct NwResult {
  GriddedFunction values;
  std::vector<std::uint8_t> covered;  // 1 where the window caught a sample
  std::size_t empty_windows = 0;
};

/// Nadaraya-Watson conditional-moment curve with the indicator kernel,
/// evaluated at the nodes of eval_grid. Nodes whose window holds no sample
/// take value 0 and are flagged in the coverage mask.
NwResult nadaraya_watson(std::span<const ModelSample> data, Moment moment,
                         const Grid& eval_grid, const KernelSpec& kspec);

struct SpectralEstimates {
  GriddedFunction eps1;
  std::vector<GriddedFunction> eps1_deriv;  // one per axis
  std::vector<GriddedFunction> eps2;        // one per axis
  double clipped_fraction = 0.0;  // nodes moved by the envelope clip
  double masked_fraction = 0.0;   // nodes with empty smoothing windows
};

/// Full spectral pipeline: windowed-mean curves on the space grid, clipped
/// to the polynomial envelope, then Fourier-transformed. The derivative of
/// eps1 is taken spectrally on the frequency grid.
SpectralEstimates spectral_estimates(std::span<const ModelSample> data, const PolyBound& bound,
                                     const KernelSpec& kspec, const Grid& space_grid);

struct WeightedSincResult {
  GriddedFunction values;
  std::size_t skipped = 0;  // samples with no neighbor inside the bandwidth
};

/// Closed-form transform of the neighbor-weighted kernel estimator:
///   2h sinc(h s / pi) sum_i y_i exp(i s z_i) / alpha_i,
/// with alpha_i = #{j != i : |z_j - z_i| <= h} and sinc(x) = sin(pi x)/(pi x).
/// Terms with alpha_i = 0 are skipped and counted.
WeightedSincResult weighted_sinc_ft(std::span<const ModelSample> data, const KernelSpec& kspec,
                                    const Grid& freq_grid);

}  // namespace gfd
