#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gfdeconv/bounds.hpp"
#include "gfdeconv/errors.hpp"
#include "gfdeconv/estimators.hpp"
#include "gfdeconv/generalized.hpp"
#include "gfdeconv/grid.hpp"

namespace gfd {

/// Knobs of the spectral solvers.
struct SolverConfig {
  double zeta = 1e-3;  // support-detection threshold on |eps1|
  PolyBound bound{};   // envelope for the phi-inverse clip (V >= 1 required there)
  double tau = 1e-10;  // |phi| zero-detection threshold for division
  std::optional<double> cutoff;  // optional half-width of the spectral cutoff box
  cplx c = 1.0;        // gamma(0) constant for the direct reconstruction branch
  bool zero_outside_window = true;  // false: spectral outputs carry NaN outside
};

void validate(const SolverConfig& cfg, int dim);

/// Noise-floor threshold for sample-based spectra: 4 n^{-1/2} log n.
double default_zeta(std::size_t n);

/// Connected set of grid nodes containing the origin where the spectrum
/// stays above the support threshold.
struct SupportWindow {
  Grid grid;
  std::vector<std::uint8_t> inside;    // flat node mask
  std::vector<std::uint8_t> boundary;  // inside nodes touching the outside or the grid edge
  std::size_t lo = 0;                  // 1-d only: first node of the window
  std::size_t hi = 0;                  // 1-d only: last node of the window
  std::size_t count = 0;               // number of inside nodes
};

/// Largest connected node set containing the origin with |eps1| >= zeta.
/// Rejects when the origin itself falls below the threshold.
SupportWindow support_window(const GriddedFunction& eps1, double zeta);

/// Log-derivative field of the error characteristic function along one
/// axis: (eps1_deriv - i eps2) / eps1, evaluated inside the window and zero
/// (masked) outside; the division is never formed outside the window.
GriddedFunction log_cf_derivative(const GriddedFunction& eps1, const GriddedFunction& eps1_deriv,
                                  const GriddedFunction& eps2, const SupportWindow& window);

struct PhiInverseResult {
  GriddedFunction values;
  double clipped_fraction = 0.0;  // fraction of window nodes moved by the clip
};

/// Reciprocal error characteristic function from its log-derivative fields:
/// exp(-integral from 0 to s of sum_k kappa_k dt_k) on the window (cumulative
/// trapezoid in 1-d, straight-segment sampling with bilinear interpolation in
/// 2-d), clipped to the envelope. The value at the origin is exactly 1, so
/// the envelope must admit it: bound.V >= 1.
PhiInverseResult phi_inverse_estimate(const std::vector<GriddedFunction>& kappas,
                                      const SupportWindow& window, const PolyBound& bound);

/// Direct reconstruction of the signal spectrum from its own log-derivative
/// fields kappa_k = i eps2_k / eps1: gamma(s) = c exp(+integral), on the
/// window, zero outside. No clipping; c is the known value gamma(0).
GriddedFunction reconstruct_gamma(const GriddedFunction& eps1,
                                  const std::vector<GriddedFunction>& eps2,
                                  const SupportWindow& window, cplx c);

/// Pointwise ratio eps/phi that bridges isolated zero bands of phi (nodes
/// with |phi| < tau) by a cubic least-squares fit through the nearest four
/// valid nodes on each side. Rejects when a band is wider than 5% of the
/// grid (zeros no longer isolated). One-dimensional grids only.
GriddedFunction divide_with_zeros(const GriddedFunction& eps, const GriddedFunction& phi,
                                  double tau);

/// Deconvolution with a known error characteristic function: inverse
/// transform of eps/phi, zero bands bridged by divide_with_zeros, optional
/// spectral cutoff. Rejects when phi is below tau on more than half the
/// grid (the supersmooth/degenerate regime where inversion is hopeless).
GeneralizedFunction deconvolve_known_cf(const GriddedFunction& eps, const GriddedFunction& phi,
                                        const SolverConfig& cfg);

/// Multiply by the indicator of the centered box of half-width T.
GriddedFunction spectral_cutoff(const GriddedFunction& eps, double T);

struct SystemSolution {
  GeneralizedFunction g_hat;  // recovered signal, inverse transform of gamma_hat
  GriddedFunction gamma_hat;  // signal spectrum on the window
  GriddedFunction phi_hat;    // error characteristic function on the window
  SupportWindow window;
  double clipped_fraction = 0.0;
  double masked_fraction = 0.0;  // grid fraction outside the window
};

/// Two-unknown-function solver: support window on eps1, log-derivative
/// fields, reciprocal-CF reconstruction, then gamma_hat = phi_inverse *
/// eps1 (zero outside the window) and g_hat = inverse transform. Rejects
/// when the window has fewer than 5 nodes. With zero_outside_window =
/// false the spectral outputs carry NaN outside the window instead of 0;
/// g_hat is always built from the zero-filled spectrum (the only
/// well-defined inverse transform).
SystemSolution solve_system(const SpectralEstimates& est, const SolverConfig& cfg);

/// Sample-path convenience overload: runs the estimator pipeline (the
/// envelope in cfg.bound is used both for the conditional-moment clip and
/// the phi-inverse clip) and then solves the system.
SystemSolution solve_system(std::span<const ModelSample> data, const KernelSpec& kspec,
                            const Grid& space_grid, const SolverConfig& cfg);

}  // namespace gfd
