#pragma once

#include <span>
#include <vector>

#include "gfdeconv/generalized.hpp"
#include "gfdeconv/grid.hpp"
#include "gfdeconv/test_function.hpp"

namespace gfd {

/// Finite-test-set surrogate for weak-topology distance:
/// max over psi in test_set of |(b1 - b2, psi)|.
double weak_distance(const GeneralizedFunction& b1, const GeneralizedFunction& b2,
                     std::span<const TestFunction> test_set);
double weak_distance(const GriddedFunction& b1, const GriddedFunction& b2,
                     std::span<const TestFunction> test_set);

/// Precomputed pairing table for one grid and one test set: row t holds
/// conj(psi_t(x_j)) * spacing, so pairing a gridded function against the
/// whole set is a matrix-vector product. Used by Monte Carlo studies that
/// evaluate many weak distances against a fixed truth.
class WeakMetricTable {
public:
  WeakMetricTable(const Grid& grid, std::vector<TestFunction> test_set);

  const std::vector<TestFunction>& test_set() const { return set_; }
  const Grid& grid() const { return grid_; }

  /// Functional values (b, psi_t) for every t.
  std::vector<cplx> pair_all(const GriddedFunction& b) const;
  std::vector<cplx> pair_all(const GeneralizedFunction& b) const;

  double distance(const GeneralizedFunction& b1, const GeneralizedFunction& b2) const;
  /// Hot path: distance of b from precomputed reference functional values.
  double distance_from(const std::vector<cplx>& ref_values, const GriddedFunction& b) const;

private:
  Grid grid_;
  std::vector<TestFunction> set_;
  std::vector<cplx> rows_;  // set_.size() x grid_.points(), row-major
};

}  // namespace gfd
