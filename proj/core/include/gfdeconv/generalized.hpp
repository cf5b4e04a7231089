#pragma once

#include <optional>
#include <vector>

#include "gfdeconv/grid.hpp"
#include "gfdeconv/test_function.hpp"

namespace gfd {

/// Delta-type singular term: weight * (derivative of order `order` of the
/// point mass at `location`). Total derivative order is capped at 2.
struct Atom {
  std::vector<double> location;  // size = dim
  cplx weight{1.0, 0.0};
  std::vector<int> order;        // multi-index; empty means order 0

  int total_order() const;
  int dim() const { return static_cast<int>(location.size()); }
};

/// Regular-plus-atomic representation of a generalized function.
struct GeneralizedFunction {
  std::optional<GriddedFunction> regular;
  std::vector<Atom> atoms;

  static GeneralizedFunction from_regular(GriddedFunction f);
  static GeneralizedFunction from_atoms(std::vector<Atom> atoms);
  static GeneralizedFunction dirac(double location, cplx weight = 1.0, int order = 0);

  int dim() const;
};

/// Check structural invariants: at least one part present, finite atom data,
/// derivative orders within cap, atom locations inside the regular grid box.
void validate(const GeneralizedFunction& b);

/// Functional value (b, psi) = integral b(t) conj(psi(t)) dt for the regular
/// part plus sum over atoms of weight * (-1)^order * conj(psi^(order)(loc)).
cplx apply_functional(const GeneralizedFunction& b, const TestFunction& psi);

/// Fourier transform as a gridded spectral function: forward_ft of the
/// regular part plus the closed-form atom images weight * (-is)^order *
/// e^{i loc s}. The atoms-only overload needs the target frequency grid.
GriddedFunction ft_generalized(const GeneralizedFunction& b);
GriddedFunction ft_generalized(const GeneralizedFunction& b, const Grid& freq_grid);

/// Convolution g * f realized spectrally. At most one operand may carry
/// atoms and at least one must have a regular part; the result is regular.
GeneralizedFunction convolve_gf(const GeneralizedFunction& g, const GeneralizedFunction& f);

/// Functional value of the generalized derivative of the unit step
/// I(x >= step_location): -(integral over the grid of) I * conj(psi'). For a
/// step at 0 this reproduces (delta, psi) = psi(0) without differencing.
cplx step_derivative_functional(double step_location, const TestFunction& psi, const Grid& g);

}  // namespace gfd
