#include "gfdeconv/test_function.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gfd {

namespace {

// h_{k-1}(x), h_k(x) by upward recurrence (h_{-1} = 0).
std::pair<double, double> hermite_pair(int k, double x) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  for (int j = 0; j < k; ++j) {
    const double next =
        x * std::sqrt(2.0 / (j + 1.0)) * cur - std::sqrt(j / (j + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return {prev, cur};
}

cplx unit_power_of_i(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

double hermite_function(int k, double x) { return hermite_pair(k, x).second; }

TestFunction TestFunction::hermite(int index, double scale) {
  if (index < 0) throw std::invalid_argument("TestFunction::hermite: index must be >= 0");
  if (!(scale > 0.0)) throw std::invalid_argument("TestFunction::hermite: scale must be positive");
  TestFunction t;
  t.kind_ = Kind::hermite;
  t.index_ = index;
  t.scale_ = scale;
  return t;
}

TestFunction TestFunction::custom(std::function<cplx(double)> value,
                                  std::function<cplx(double)> deriv1,
                                  std::function<cplx(double)> deriv2,
                                  std::function<cplx(double)> fourier) {
  if (!value) throw std::invalid_argument("TestFunction::custom: value evaluator required");
  TestFunction t;
  t.kind_ = Kind::custom;
  t.f0_ = std::move(value);
  t.f1_ = std::move(deriv1);
  t.f2_ = std::move(deriv2);
  t.ft_ = std::move(fourier);
  return t;
}

cplx TestFunction::operator()(double x) const {
  if (kind_ == Kind::custom) return f0_(x);
  return cplx(hermite_function(index_, x / scale_) / std::sqrt(scale_));
}

cplx TestFunction::deriv1(double x) const {
  if (kind_ == Kind::custom) {
    if (!f1_) throw std::invalid_argument("TestFunction: derivative evaluator not provided");
    return f1_(x);
  }
  // h_k' = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1}
  const double u = x / scale_;
  const auto [hm, hk] = hermite_pair(index_, u);
  const double hp =
      u * std::sqrt(2.0 / (index_ + 1.0)) * hk - std::sqrt(index_ / (index_ + 1.0)) * hm;
  const double d = std::sqrt(index_ / 2.0) * hm - std::sqrt((index_ + 1.0) / 2.0) * hp;
  return cplx(d / std::pow(scale_, 1.5));
}

cplx TestFunction::deriv2(double x) const {
  if (kind_ == Kind::custom) {
    if (!f2_) throw std::invalid_argument("TestFunction: second-derivative evaluator not provided");
    return f2_(x);
  }
  // h_k'' = (x^2 - (2k+1)) h_k
  const double u = x / scale_;
  const double hk = hermite_function(index_, u);
  return cplx((u * u - (2.0 * index_ + 1.0)) * hk / std::pow(scale_, 2.5));
}

cplx TestFunction::ft(double s) const {
  if (kind_ == Kind::custom) {
    if (!ft_) throw std::invalid_argument("TestFunction: transform evaluator not provided");
    return ft_(s);
  }
  const double v = std::sqrt(2.0 * std::numbers::pi * scale_) * hermite_function(index_, scale_ * s);
  return unit_power_of_i(index_) * v;
}

std::vector<TestFunction> hermite_test_set(int count, double scale) {
  if (count < 1) throw std::invalid_argument("hermite_test_set: count must be >= 1");
  std::vector<TestFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(TestFunction::hermite(k, scale));
  return out;
}

std::vector<TestFunction> default_test_set() {
  std::vector<TestFunction> out;
  out.reserve(48);
  for (double scale : {0.5, 1.0, 2.0})
    for (int k = 0; k < 16; ++k) out.push_back(TestFunction::hermite(k, scale));
  return out;
}

bool decays_rapidly(const TestFunction& psi, double boundary) {
  const double w = std::pow(std::abs(boundary), 8.0);
  return w * std::abs(psi(boundary)) < 1e-6 && w * std::abs(psi(-boundary)) < 1e-6;
}

}  // namespace gfd
