#include "gfdeconv/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gfd {

namespace {

int m_along(const std::vector<int>& m, int axis, int dim) {
  if (m.empty()) return 0;
  if (m.size() == 1) return m[0];
  if (static_cast<int>(m.size()) != dim)
    throw std::invalid_argument("PolyBound: m must have one entry or one per axis");
  return m[static_cast<std::size_t>(axis)];
}

double weight_pow(double t, int m) {
  double w = 1.0;
  const double b = 1.0 + t * t;
  for (int i = 0; i < m; ++i) w *= b;
  return w;
}

// Node indices ordered by increasing distance from the origin node
// (ties: positive side first), so bound-check witnesses are the violation
// nearest the origin.
std::vector<std::size_t> outward_order(const Grid& g) {
  const std::size_t n = g.points();
  const std::size_t c = g.origin_index();
  std::vector<std::size_t> axis;
  axis.reserve(n);
  axis.push_back(c);
  for (std::size_t k = 1; k < n; ++k) {
    if (c + k < n) axis.push_back(c + k);
    if (c >= k) axis.push_back(c - k);
  }
  if (g.dim() == 1) return axis;
  std::vector<std::size_t> out;
  out.reserve(n * n);
  // order 2-d nodes by max(|i0-c|, |i1-c|) rings, inner rings first
  std::vector<std::size_t> ring(n);
  for (std::size_t j = 0; j < n; ++j)
    ring[j] = j >= c ? j - c : c - j;
  std::vector<std::vector<std::size_t>> by_ring(n);
  for (std::size_t i0 = 0; i0 < n; ++i0)
    for (std::size_t i1 = 0; i1 < n; ++i1)
      by_ring[std::max(ring[i0], ring[i1])].push_back(i0 * n + i1);
  for (const auto& r : by_ring) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace

void validate(const PolyBound& bound, int dim) {
  if (!(bound.V > 0.0) || !std::isfinite(bound.V))
    throw std::invalid_argument("PolyBound: V must be positive and finite");
  for (int mi : bound.m)
    if (mi < 0) throw std::invalid_argument("PolyBound: m must be componentwise >= 0");
  if (bound.m.size() != 1 && static_cast<int>(bound.m.size()) != dim)
    throw std::invalid_argument("PolyBound: m must have one entry or one per axis");
}

double envelope(const PolyBound& bound, const Grid& g, std::size_t flat_index) {
  const int dim = g.dim();
  double e = bound.V;
  if (dim == 1) {
    e *= weight_pow(g.node(flat_index), m_along(bound.m, 0, dim));
  } else {
    const std::size_t n = g.points();
    e *= weight_pow(g.node(flat_index / n), m_along(bound.m, 0, dim));
    e *= weight_pow(g.node(flat_index % n), m_along(bound.m, 1, dim));
  }
  return e;
}

GriddedFunction clip_to_bound(const GriddedFunction& b, const PolyBound& bound) {
  validate(bound, b.grid.dim());
  GriddedFunction out = b;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double env = envelope(bound, b.grid, i);
    const double mag = std::abs(out.values[i]);
    if (mag >= env) {
      cplx v = out.values[i] * (env / mag);  // mag >= env > 0, so no division by zero
      // The envelope describes an open set (strict inequality), so the
      // projection must land strictly inside it; renormalize until it does.
      // This also makes clipping idempotent: a second pass sees mag < env.
      constexpr double kInward = 1.0 - std::numeric_limits<double>::epsilon();
      for (int guard = 0; guard < 8 && !(std::abs(v) < env); ++guard)
        v *= (env / std::abs(v)) * kInward;
      out.values[i] = v;
    }
  }
  return out;
}

BoundCheck check_uniform_bound(const GriddedFunction& b, const PolyBound& bound) {
  validate(bound, b.grid.dim());
  for (std::size_t i : outward_order(b.grid)) {
    if (!(std::abs(b.values[i]) < envelope(bound, b.grid, i)))
      return BoundCheck{false, i};
  }
  return BoundCheck{true, std::nullopt};
}

CondsResult check_conds_integral(const GriddedFunction& b, const std::vector<int>& m) {
  const Grid& g = b.grid;
  const int dim = g.dim();
  const std::size_t n = g.points();
  const double edge = 0.9 * g.half_width();
  double total = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    double w, r;
    if (dim == 1) {
      const double t = g.node(i);
      w = 1.0 / weight_pow(t, m_along(m, 0, dim));
      r = std::abs(t);
    } else {
      const double t0 = g.node(i / n), t1 = g.node(i % n);
      w = 1.0 / (weight_pow(t0, m_along(m, 0, dim)) * weight_pow(t1, m_along(m, 1, dim)));
      r = std::max(std::abs(t0), std::abs(t1));
    }
    const double v = std::abs(b.values[i]) * w;
    total += v;
    if (r >= edge) tail += v;
  }
  double scale = g.spacing();
  if (dim == 2) scale *= g.spacing();
  total *= scale;
  tail *= scale;
  return CondsResult{total, total == 0.0 || tail < 0.01 * total};
}

}  // namespace gfd
