#include "gfdeconv/sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace gfd {

namespace {

constexpr cplx kI{0.0, 1.0};

double sinc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

void check_primitive(Family f, const char* what) {
  if (f == Family::mixture_with_atom)
    throw std::invalid_argument(std::string(what) +
                                ": mixture base must be a primitive family");
}

cplx primitive_cf(Family family, double scale, double s) {
  switch (family) {
    case Family::gaussian:
      return std::exp(-0.5 * scale * scale * s * s);
    case Family::laplace:
      return 1.0 / (1.0 + scale * scale * s * s);
    case Family::uniform:
      return sinc(scale * s);
    case Family::triangular: {
      const double h = sinc(0.5 * scale * s);
      return h * h;
    }
    case Family::mixture_with_atom:
      break;
  }
  throw std::invalid_argument("cf_value: unknown family");
}

double primitive_density(Family family, double scale, double x) {
  if (scale == 0.0) return 0.0;
  switch (family) {
    case Family::gaussian: {
      const double t = x / scale;
      return std::exp(-0.5 * t * t) / (scale * std::sqrt(2.0 * std::numbers::pi));
    }
    case Family::laplace:
      return std::exp(-std::abs(x) / scale) / (2.0 * scale);
    case Family::uniform:
      return std::abs(x) <= scale ? 1.0 / (2.0 * scale) : 0.0;
    case Family::triangular: {
      const double t = std::abs(x) / scale;
      return t < 1.0 ? (1.0 - t) / scale : 0.0;
    }
    case Family::mixture_with_atom:
      break;
  }
  throw std::invalid_argument("density_value: unknown family");
}

/// Distribution function of the two compactly supported laws, used to
/// tabulate their discontinuous or kinked densities by cell averages.
double compact_cdf(Family family, double scale, double x) {
  const double t = x / scale;
  if (family == Family::uniform) {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return 0.5 * (t + 1.0);
  }
  // triangular
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (t < 0.0) return 0.5 * (1.0 + t) * (1.0 + t);
  return 1.0 - 0.5 * (1.0 - t) * (1.0 - t);
}

GriddedFunction tabulate_primitive(Family family, double scale,
                                   const Grid& grid) {
  GriddedFunction out(grid);
  const double dx = grid.spacing();
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const double x = grid.node(j);
    if (family == Family::uniform || family == Family::triangular) {
      out.values[j] = (compact_cdf(family, scale, x + 0.5 * dx) -
                       compact_cdf(family, scale, x - 0.5 * dx)) /
                      dx;
    } else {
      out.values[j] = primitive_density(family, scale, x);
    }
  }
  return out;
}

double draw_primitive(Family family, double scale, Rng& rng) {
  if (scale == 0.0) return 0.0;
  switch (family) {
    case Family::gaussian:
      return scale * rng.normal();
    case Family::laplace:
      // difference of two unit exponentials, which avoids the log
      // singularity an inverse-distribution draw would hit at the ends
      return scale * std::log(rng.uniform_pos() / rng.uniform_pos());
    case Family::uniform:
      return scale * (2.0 * rng.uniform() - 1.0);
    case Family::triangular:
      return scale * (rng.uniform() + rng.uniform() - 1.0);
    case Family::mixture_with_atom:
      break;
  }
  throw std::invalid_argument("draw: unknown family");
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

void validate(const DistributionSpec& spec) {
  require_finite(spec.scale, "DistributionSpec: scale");
  if (spec.scale < 0.0)
    throw std::invalid_argument("DistributionSpec: scale must be >= 0");
  if (spec.family == Family::mixture_with_atom) {
    require_finite(spec.atom_weight, "DistributionSpec: atom weight");
    require_finite(spec.atom_location, "DistributionSpec: atom location");
    require_finite(spec.base_scale, "DistributionSpec: base scale");
    if (spec.atom_weight < 0.0 || spec.atom_weight > 1.0)
      throw std::invalid_argument(
          "DistributionSpec: atom weight must lie in [0, 1]");
    if (spec.base_scale < 0.0)
      throw std::invalid_argument("DistributionSpec: base scale must be >= 0");
    check_primitive(spec.base, "DistributionSpec");
  }
}

cplx cf_value(const DistributionSpec& spec, double s) {
  if (spec.scale == 0.0 && spec.family != Family::mixture_with_atom)
    return 1.0;
  if (spec.family == Family::mixture_with_atom) {
    check_primitive(spec.base, "cf_value");
    const double p = spec.atom_weight;
    const cplx atom = std::exp(kI * (s * spec.atom_location));
    const cplx base = spec.base_scale == 0.0
                          ? cplx{1.0}
                          : primitive_cf(spec.base, spec.base_scale, s);
    return p * atom + (1.0 - p) * base;
  }
  return primitive_cf(spec.family, spec.scale, s);
}

GriddedFunction error_cf(const DistributionSpec& spec, const Grid& freq_grid) {
  validate(spec);
  if (freq_grid.dim() != 1)
    throw std::invalid_argument("error_cf: grid must be 1-d");
  GriddedFunction out(freq_grid);
  for (std::size_t k = 0; k < freq_grid.points(); ++k)
    out.values[k] = cf_value(spec, freq_grid.node(k));
  return out;
}

double density_value(const DistributionSpec& spec, double x) {
  if (spec.family == Family::mixture_with_atom) {
    check_primitive(spec.base, "density_value");
    return (1.0 - spec.atom_weight) *
           primitive_density(spec.base, spec.base_scale, x);
  }
  return primitive_density(spec.family, spec.scale, x);
}

GeneralizedFunction as_generalized(const DistributionSpec& spec,
                                   const Grid& space_grid) {
  validate(spec);
  if (space_grid.dim() != 1)
    throw std::invalid_argument("as_generalized: grid must be 1-d");

  Family cont = spec.family;
  double cont_scale = spec.scale;
  double cont_mass = 1.0;
  std::vector<Atom> atoms;
  if (spec.family == Family::mixture_with_atom) {
    cont = spec.base;
    cont_scale = spec.base_scale;
    cont_mass = 1.0 - spec.atom_weight;
    if (spec.atom_weight > 0.0)
      atoms.push_back(Atom{{spec.atom_location}, spec.atom_weight, {}});
  }
  if (cont_scale == 0.0 && cont_mass > 0.0) {
    atoms.push_back(Atom{{0.0}, cont_mass, {}});
    cont_mass = 0.0;
  }

  if (cont_mass == 0.0) return GeneralizedFunction::from_atoms(std::move(atoms));

  GriddedFunction f = tabulate_primitive(cont, cont_scale, space_grid);
  if (cont_mass != 1.0)
    for (auto& v : f.values) v *= cont_mass;
  if (atoms.empty()) return GeneralizedFunction::from_regular(std::move(f));

  GeneralizedFunction out;
  out.regular = std::move(f);
  out.atoms = std::move(atoms);
  return out;
}

double draw(const DistributionSpec& spec, Rng& rng) {
  if (spec.family == Family::mixture_with_atom) {
    check_primitive(spec.base, "draw");
    if (rng.uniform() < spec.atom_weight) return spec.atom_location;
    return draw_primitive(spec.base, spec.base_scale, rng);
  }
  return draw_primitive(spec.family, spec.scale, rng);
}

void validate(const RegressionSpec& spec) {
  for (double p : spec.params) require_finite(p, "RegressionSpec: parameter");
  const std::size_t n = spec.params.size();
  switch (spec.kind) {
    case RegressionKind::gaussian_bump:
      if (n != 3)
        throw std::invalid_argument(
            "RegressionSpec: gaussian_bump takes {A, c, w}");
      if (spec.params[2] <= 0.0)
        throw std::invalid_argument("RegressionSpec: bump width must be > 0");
      return;
    case RegressionKind::bump_plus_constant:
      if (n != 4)
        throw std::invalid_argument(
            "RegressionSpec: bump_plus_constant takes {A, c, w, K}");
      if (spec.params[2] <= 0.0)
        throw std::invalid_argument("RegressionSpec: bump width must be > 0");
      return;
    case RegressionKind::sum_of_peaks:
      if (n == 0 || n % 3 != 0)
        throw std::invalid_argument(
            "RegressionSpec: sum_of_peaks takes {A, c, w} triples");
      for (std::size_t i = 2; i < n; i += 3)
        if (spec.params[i] <= 0.0)
          throw std::invalid_argument("RegressionSpec: peak width must be > 0");
      return;
    case RegressionKind::polynomial:
      if (n == 0 || n > 4)
        throw std::invalid_argument(
            "RegressionSpec: polynomial degree is capped at 3");
      return;
  }
  throw std::invalid_argument("RegressionSpec: unknown kind");
}

namespace {

double bump(double a, double c, double w, double x) {
  const double t = (x - c) / w;
  return a * std::exp(-t * t);
}

}  // namespace

double eval_regression(const RegressionSpec& spec, double x) {
  const auto& p = spec.params;
  switch (spec.kind) {
    case RegressionKind::gaussian_bump:
      return bump(p[0], p[1], p[2], x);
    case RegressionKind::bump_plus_constant:
      return bump(p[0], p[1], p[2], x) + p[3];
    case RegressionKind::sum_of_peaks: {
      double acc = 0.0;
      for (std::size_t i = 0; i + 2 < p.size(); i += 3)
        acc += bump(p[i], p[i + 1], p[i + 2], x);
      return acc;
    }
    case RegressionKind::polynomial: {
      double acc = 0.0;
      for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
      return acc;
    }
  }
  throw std::invalid_argument("eval_regression: unknown kind");
}

GeneralizedFunction regression_as_gf(const RegressionSpec& spec,
                                     const Grid& space_grid) {
  validate(spec);
  if (space_grid.dim() != 1)
    throw std::invalid_argument("regression_as_gf: grid must be 1-d");
  return GeneralizedFunction::from_regular(
      tabulate(space_grid, [&](double x) { return eval_regression(spec, x); }));
}

void validate(const ModelConfig& cfg) {
  validate(cfg.g);
  validate(cfg.u);
  validate(cfg.ux);
  validate(cfg.uy);
  require_finite(cfg.z_sd, "ModelConfig: z_sd");
  require_finite(cfg.hetero_x, "ModelConfig: hetero_x");
  if (cfg.z_sd <= 0.0)
    throw std::invalid_argument("ModelConfig: z_sd must be > 0");
  if (cfg.hetero_x < 0.0)
    throw std::invalid_argument("ModelConfig: hetero_x must be >= 0");
}

std::vector<ModelSample> sample_model(const ModelConfig& cfg, std::size_t n,
                                      std::uint64_t seed) {
  validate(cfg);
  Rng rng(seed);
  std::vector<ModelSample> out(n);
  for (auto& s : out) {
    s.z = cfg.z_sd * rng.normal();
    s.u = draw(cfg.u, rng);
    s.ux = draw(cfg.ux, rng) * std::sqrt(1.0 + cfg.hetero_x * s.z * s.z);
    s.uy = draw(cfg.uy, rng);
    s.xstar = s.z - s.u;
    s.y = eval_regression(cfg.g, s.xstar) + s.uy;
    s.x = s.xstar + s.ux;
  }
  return out;
}

IllposedPair illposed_pair(int n, const Grid& space_grid) {
  if (space_grid.dim() != 1)
    throw std::invalid_argument("illposed_pair: grid must be 1-d");
  if (n < 2) throw std::invalid_argument("illposed_pair: n must be >= 2");
  const double lo = n - 1.0 / n;
  const double hi = n + 1.0 / n;
  if (hi > space_grid.half_width())
    throw std::invalid_argument(
        "illposed_pair: perturbation band extends beyond the grid");

  IllposedPair pair{GriddedFunction(space_grid), GriddedFunction(space_grid)};
  for (std::size_t j = 0; j < space_grid.points(); ++j) {
    const double x = space_grid.node(j);
    if (x > lo && x < hi) {
      pair.gamma_diff.values[j] = std::exp(x * x);
      pair.eps_diff.values[j] = 1.0;
    }
  }
  return pair;
}

}  // namespace gfd
