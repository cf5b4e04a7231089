#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gfdeconv/test_function.hpp"

namespace gfd {

/// Covariance functionals of the derivative-of-Wiener-process random
/// generalized function and of its Fourier transform:
///   wiener_derivative:     B(psi1, psi2) = integral_0^inf psi1 conj(psi2) dt
///   ft_wiener_derivative:  the same with Ft(psi1), Ft(psi2).
enum class CovarianceKind { wiener_derivative, ft_wiener_derivative };

/// Half-line covariance integral by composite Simpson quadrature
/// (positive weights, so Gram matrices are PSD by construction).
cplx wiener_covariance(CovarianceKind kind, const TestFunction& psi1, const TestFunction& psi2);

/// Hermitian Gram matrix B(psi_i, psi_j), row-major m x m.
std::vector<cplx> covariance_gram(CovarianceKind kind, std::span<const TestFunction> test_set);

/// One draw of the zero-mean Gaussian vector ((b, psi_1), ..., (b, psi_m))
/// with the Gram covariance: Cholesky with 1e-12 diagonal jitter, applied to
/// a seed-deterministic standard normal vector (circular complex normal for
/// the transform-side kind). Throws SolverRejection if the jittered Gram is
/// not positive semidefinite.
std::vector<cplx> sample_process(CovarianceKind kind, std::span<const TestFunction> test_set,
                                 std::uint64_t seed);

}  // namespace gfd
