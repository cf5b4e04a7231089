#include "gfdeconv/weak_metric.hpp"

#include <cmath>
#include <stdexcept>

namespace gfd {

double weak_distance(const GeneralizedFunction& b1, const GeneralizedFunction& b2,
                     std::span<const TestFunction> test_set) {
  if (test_set.empty()) throw std::invalid_argument("weak_distance: test set must be non-empty");
  double d = 0.0;
  for (const TestFunction& psi : test_set)
    d = std::max(d, std::abs(apply_functional(b1, psi) - apply_functional(b2, psi)));
  return d;
}

double weak_distance(const GriddedFunction& b1, const GriddedFunction& b2,
                     std::span<const TestFunction> test_set) {
  return weak_distance(GeneralizedFunction::from_regular(b1), GeneralizedFunction::from_regular(b2),
                       test_set);
}

WeakMetricTable::WeakMetricTable(const Grid& grid, std::vector<TestFunction> test_set)
    : grid_(grid), set_(std::move(test_set)) {
  if (grid_.dim() != 1) throw std::invalid_argument("WeakMetricTable: grid must be 1-d");
  if (set_.empty()) throw std::invalid_argument("WeakMetricTable: test set must be non-empty");
  const std::size_t n = grid_.points();
  rows_.resize(set_.size() * n);
  const double dx = grid_.spacing();
  for (std::size_t t = 0; t < set_.size(); ++t)
    for (std::size_t j = 0; j < n; ++j)
      rows_[t * n + j] = std::conj(set_[t](grid_.node(j))) * dx;
}

std::vector<cplx> WeakMetricTable::pair_all(const GriddedFunction& b) const {
  if (!same_grid(b.grid, grid_)) throw std::invalid_argument("WeakMetricTable: grid mismatch");
  const std::size_t n = grid_.points();
  std::vector<cplx> out(set_.size());
  for (std::size_t t = 0; t < set_.size(); ++t) {
    cplx sum{};
    const cplx* row = rows_.data() + t * n;
    for (std::size_t j = 0; j < n; ++j) sum += row[j] * b.values[j];
    out[t] = sum;
  }
  return out;
}

std::vector<cplx> WeakMetricTable::pair_all(const GeneralizedFunction& b) const {
  validate(b);
  std::vector<cplx> out(set_.size());
  if (b.regular) out = pair_all(*b.regular);
  for (const Atom& a : b.atoms) {
    const int n = a.total_order();
    const double x = a.location[0];
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t t = 0; t < set_.size(); ++t) {
      cplx d;
      switch (n) {
        case 0: d = set_[t](x); break;
        case 1: d = set_[t].deriv1(x); break;
        default: d = set_[t].deriv2(x); break;
      }
      out[t] += a.weight * sign * std::conj(d);
    }
  }
  return out;
}

double WeakMetricTable::distance(const GeneralizedFunction& b1, const GeneralizedFunction& b2) const {
  const auto v1 = pair_all(b1), v2 = pair_all(b2);
  double d = 0.0;
  for (std::size_t t = 0; t < v1.size(); ++t) d = std::max(d, std::abs(v1[t] - v2[t]));
  return d;
}

double WeakMetricTable::distance_from(const std::vector<cplx>& ref_values,
                                      const GriddedFunction& b) const {
  if (ref_values.size() != set_.size())
    throw std::invalid_argument("WeakMetricTable: reference value count mismatch");
  const auto v = pair_all(b);
  double d = 0.0;
  for (std::size_t t = 0; t < v.size(); ++t) d = std::max(d, std::abs(v[t] - ref_values[t]));
  return d;
}

}  // namespace gfd
