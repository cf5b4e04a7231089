#include "gfdeconv/generalized.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "gfdeconv/fourier.hpp"

namespace gfd {

namespace {

cplx pow_int(cplx z, int n) {
  cplx out{1.0, 0.0};
  for (int i = 0; i < n; ++i) out *= z;
  return out;
}

int order_along(const Atom& a, std::size_t axis) {
  return axis < a.order.size() ? a.order[axis] : 0;
}

}  // namespace

int Atom::total_order() const {
  int t = 0;
  for (int o : order) t += o;
  return t;
}

GeneralizedFunction GeneralizedFunction::from_regular(GriddedFunction f) {
  GeneralizedFunction b;
  b.regular = std::move(f);
  validate(b);
  return b;
}

GeneralizedFunction GeneralizedFunction::from_atoms(std::vector<Atom> atoms) {
  GeneralizedFunction b;
  b.atoms = std::move(atoms);
  validate(b);
  return b;
}

GeneralizedFunction GeneralizedFunction::dirac(double location, cplx weight, int order) {
  return from_atoms({Atom{{location}, weight, {order}}});
}

int GeneralizedFunction::dim() const {
  if (regular) return regular->grid.dim();
  if (!atoms.empty()) return atoms.front().dim();
  return 0;
}

void validate(const GeneralizedFunction& b) {
  if (!b.regular && b.atoms.empty())
    throw std::invalid_argument("GeneralizedFunction: needs a regular part or atoms");
  const int dim = b.dim();
  for (const Atom& a : b.atoms) {
    if (a.dim() != dim) throw std::invalid_argument("GeneralizedFunction: atom dimension mismatch");
    if (!std::isfinite(a.weight.real()) || !std::isfinite(a.weight.imag()))
      throw std::invalid_argument("GeneralizedFunction: atom weight must be finite");
    int total = 0;
    for (int o : a.order) {
      if (o < 0) throw std::invalid_argument("GeneralizedFunction: atom derivative order must be >= 0");
      total += o;
    }
    if (total > 2)
      throw std::invalid_argument("GeneralizedFunction: atom derivative order capped at 2");
    for (double c : a.location) {
      if (!std::isfinite(c)) throw std::invalid_argument("GeneralizedFunction: atom location must be finite");
      if (b.regular && std::abs(c) > b.regular->grid.half_width())
        throw std::invalid_argument("GeneralizedFunction: atom location outside the grid box");
    }
  }
}

cplx apply_functional(const GeneralizedFunction& b, const TestFunction& psi) {
  validate(b);
  if (b.dim() != 1)
    throw std::invalid_argument("apply_functional: test functions are one-dimensional");
  cplx out{};
  if (b.regular) {
    const Grid& g = b.regular->grid;
    cplx sum{};
    for (std::size_t j = 0; j < g.points(); ++j)
      sum += b.regular->values[j] * std::conj(psi(g.node(j)));
    out += sum * g.spacing();
  }
  for (const Atom& a : b.atoms) {
    const int n = a.total_order();
    const double x = a.location[0];
    cplx d;
    switch (n) {
      case 0: d = psi(x); break;
      case 1: d = psi.deriv1(x); break;
      default: d = psi.deriv2(x); break;
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    out += a.weight * sign * std::conj(d);
  }
  return out;
}

GriddedFunction ft_generalized(const GeneralizedFunction& b) {
  validate(b);
  if (!b.regular)
    throw std::invalid_argument("ft_generalized: atoms-only input needs an explicit frequency grid");
  return ft_generalized(b, b.regular->grid.dual());
}

GriddedFunction ft_generalized(const GeneralizedFunction& b, const Grid& freq_grid) {
  validate(b);
  GriddedFunction out(freq_grid);
  if (b.regular) {
    out = forward_ft(*b.regular);
    if (!same_grid(out.grid, freq_grid))
      throw std::invalid_argument("ft_generalized: frequency grid must be the dual of the regular grid");
  }
  if (b.atoms.empty()) return out;

  const std::size_t n = freq_grid.points();
  if (freq_grid.dim() == 1) {
    for (const Atom& a : b.atoms)
      for (std::size_t k = 0; k < n; ++k) {
        const double s = freq_grid.node(k);
        out.values[k] += a.weight * pow_int(cplx(0.0, -s), a.total_order()) *
                         std::polar(1.0, a.location[0] * s);
      }
  } else {
    for (const Atom& a : b.atoms)
      for (std::size_t k0 = 0; k0 < n; ++k0)
        for (std::size_t k1 = 0; k1 < n; ++k1) {
          const double s0 = freq_grid.node(k0), s1 = freq_grid.node(k1);
          out.at(k0, k1) += a.weight * pow_int(cplx(0.0, -s0), order_along(a, 0)) *
                            pow_int(cplx(0.0, -s1), order_along(a, 1)) *
                            std::polar(1.0, a.location[0] * s0 + a.location[1] * s1);
        }
  }
  return out;
}

GeneralizedFunction convolve_gf(const GeneralizedFunction& g, const GeneralizedFunction& f) {
  validate(g);
  validate(f);
  if (!g.atoms.empty() && !f.atoms.empty())
    throw std::invalid_argument("convolve_gf: convolution of two atomic parts is not supported");
  if (!g.regular && !f.regular)
    throw std::invalid_argument("convolve_gf: at least one operand needs a regular density part");
  const GriddedFunction* base = f.regular ? &*f.regular : &*g.regular;
  if (g.regular && f.regular && !same_grid(g.regular->grid, f.regular->grid))
    throw std::invalid_argument("convolve_gf: operands must share a grid");
  if (g.regular && !boundary_negligible(*g.regular))
    std::fputs("warning: convolve_gf: operand not negligible near the grid boundary (aliasing risk)\n",
               stderr);
  if (f.regular && !boundary_negligible(*f.regular))
    std::fputs("warning: convolve_gf: operand not negligible near the grid boundary (aliasing risk)\n",
               stderr);

  const Grid freq = base->grid.dual();
  GriddedFunction spec = ft_generalized(g, freq);
  const GriddedFunction other = ft_generalized(f, freq);
  for (std::size_t i = 0; i < spec.values.size(); ++i) spec.values[i] *= other.values[i];
  GriddedFunction w = inverse_ft(spec);
  w.grid = base->grid;
  return GeneralizedFunction::from_regular(std::move(w));
}

cplx step_derivative_functional(double step_location, const TestFunction& psi, const Grid& g) {
  if (g.dim() != 1) throw std::invalid_argument("step_derivative_functional: grid must be 1-d");
  const double hi = g.half_width();
  if (step_location >= hi)
    throw std::invalid_argument("step_derivative_functional: step outside the grid box");
  // The integrand I(x >= a) conj(psi') jumps at a, so quadrature on the grid
  // itself floors at O(spacing). Composite Simpson from the jump to the box
  // edge at fixed fine resolution keeps the error below 1e-10.
  const std::size_t segments = std::size_t{1} << 18;
  const double h = (hi - step_location) / static_cast<double>(segments);
  cplx sum{};
  for (std::size_t q = 0; q <= segments; ++q) {
    const double w = (q == 0 || q == segments) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
    sum += w * std::conj(psi.deriv1(step_location + h * static_cast<double>(q)));
  }
  return -sum * (h / 3.0);
}

}  // namespace gfd
