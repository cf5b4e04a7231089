#pragma once

#include <cstdint>
#include <vector>

#include "gfdeconv/estimators.hpp"
#include "gfdeconv/generalized.hpp"
#include "gfdeconv/grid.hpp"
#include "gfdeconv/rng.hpp"

namespace gfd {

/// Mean-zero error laws with closed-form characteristic functions.
///
/// `scale` is sigma (gaussian), the rate parameter b (laplace), or the
/// half-width a (uniform, triangular).  A zero scale denotes the degenerate
/// point mass at the origin (characteristic function identically 1), which is
/// how a noiseless channel is expressed.
///
/// `mixture_with_atom` places probability `atom_weight` on the single point
/// `atom_location` and the rest on a `base` law with `base_scale`; its
/// characteristic function is p e^{i s a0} + (1-p) cf_base(s).  With the atom
/// at the origin and p > 1/2 the modulus is bounded below by 2p - 1, so the
/// law has no characteristic-function zeros despite a non-smooth component.
enum class Family {
  gaussian,
  laplace,
  uniform,
  triangular,
  mixture_with_atom,
};

struct DistributionSpec {
  Family family = Family::gaussian;
  double scale = 1.0;
  double atom_weight = 0.0;    ///< mixture only: probability p of the atom
  double atom_location = 0.0;  ///< mixture only: position of the atom
  Family base = Family::gaussian;  ///< mixture only: continuous component
  double base_scale = 1.0;         ///< mixture only: its scale
};

/// Rejects non-finite or negative scales, atom weights outside [0, 1], and a
/// mixture whose base is itself a mixture.
void validate(const DistributionSpec& spec);

/// Characteristic function E e^{isU} at a single point.
cplx cf_value(const DistributionSpec& spec, double s);

/// Characteristic function tabulated on a one-dimensional frequency grid.
GriddedFunction error_cf(const DistributionSpec& spec, const Grid& freq_grid);

/// Lebesgue density of the continuous part at x (the mixture atom and the
/// degenerate scale-zero law carry no density).
double density_value(const DistributionSpec& spec, double x);

/// The law as a generalized function on a space grid: the continuous part is
/// tabulated (by cell averages where the density jumps, so that the grid
/// function integrates like the law does), and a mixture atom becomes an
/// explicit atom term.
GeneralizedFunction as_generalized(const DistributionSpec& spec,
                                   const Grid& space_grid);

/// One variate.  Consumes a deterministic number of uniforms per family
/// except gaussian, which uses the generator's normal() stream.
double draw(const DistributionSpec& spec, Rng& rng);

/// Regression curves used by the simulation harness.
///
/// params by kind:
///   gaussian_bump      {A, c, w}        A exp(-((x-c)/w)^2)
///   bump_plus_constant {A, c, w, K}     the bump plus a constant level K
///   sum_of_peaks       {A1,c1,w1, ...}  superposition of bumps
///   polynomial         {a0, a1, ...}    degree at most 3
enum class RegressionKind {
  gaussian_bump,
  bump_plus_constant,
  sum_of_peaks,
  polynomial,
};

struct RegressionSpec {
  RegressionKind kind = RegressionKind::gaussian_bump;
  std::vector<double> params{1.0, 0.0, 1.0};
};

/// Rejects non-finite parameters, non-positive bump widths, a peak list whose
/// length is not a multiple of three, and polynomials above degree 3.
void validate(const RegressionSpec& spec);

double eval_regression(const RegressionSpec& spec, double x);

/// The curve tabulated on a space grid as a regular generalized function.
GeneralizedFunction regression_as_gf(const RegressionSpec& spec,
                                     const Grid& space_grid);

/// Data-generating process for the two-equation measurement-error model:
///
///   z  ~ N(0, z_sd^2)                    observed regressor
///   x* = z - u                           latent regressor, u ~ `u`
///   y  = g(x*) + u_y                     response, u_y ~ `uy`
///   x  = x* + u_x                        contaminated measurement
///
/// u, u_x, u_y are drawn independently of z and of each other, so the
/// conditional-mean-zero requirements on the error channels hold by
/// construction.  `hetero_x` >= 0 scales u_x by sqrt(1 + hetero_x z^2),
/// which leaves E(u_x | z) = 0 while making its conditional variance grow
/// with |z|.
struct ModelConfig {
  RegressionSpec g{};
  DistributionSpec u{};
  DistributionSpec ux{};
  DistributionSpec uy{};
  double z_sd = 2.0;
  double hetero_x = 0.0;
};

void validate(const ModelConfig& cfg);

/// Draws n samples.  The per-sample draw order (z, u, u_x, u_y) is fixed, so
/// a given (config, n, seed) always yields the same data.  Latent variables
/// are retained on each sample for diagnostics.
std::vector<ModelSample> sample_model(const ModelConfig& cfg, std::size_t n,
                                      std::uint64_t seed);

/// Perturbation pair demonstrating ill-posedness of the deconvolution
/// problem without a polynomial-growth bound: on the band
/// (n - 1/n, n + 1/n) the solution perturbation is e^{x^2} while the data
/// perturbation is a plain indicator, so the data difference vanishes weakly
/// as n grows while the solution difference diverges against any positive
/// test functional.  Requires n >= 2 and the whole band inside the grid.
struct IllposedPair {
  GriddedFunction gamma_diff;  ///< solution-side perturbation, e^{x^2} on band
  GriddedFunction eps_diff;    ///< data-side perturbation, indicator of band
};

IllposedPair illposed_pair(int n, const Grid& space_grid);

}  // namespace gfd
