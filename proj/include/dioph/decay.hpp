#pragma once

#include <algorithm>
#include <cmath>

namespace dioph {

/// Power-log decay rho * T^(-gamma) * log^logpow(max(T, 2)).
///
/// Plays both the psi and the phi role in the covering analytics and in
/// the lattice counting routines. The logarithm is clamped at T = 2 so small
/// arguments stay finite and positive.
struct DecayFunction {
  double rho = 1.0;
  double gamma = 0.0;
  double logpow = 0.0;

  static DecayFunction constant(double value) { return {value, 0.0, 0.0}; }
  static DecayFunction power(double gamma, double rho = 1.0) { return {rho, gamma, 0.0}; }

  double operator()(double t) const {
    const double log_term = logpow == 0.0 ? 1.0 : std::pow(std::log(std::max(t, 2.0)), logpow);
    return rho * std::pow(t, -gamma) * log_term;
  }
};

/// True when f is nonincreasing on a geometric grid of `points` samples of
/// [lo, hi].
template <class F>
bool nonincreasing_on_grid(const F& f, double lo, double hi, int points = 1000) {
  double prev = f(lo);
  for (int i = 1; i < points; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const double cur = f(t);
    if (cur > prev) return false;
    prev = cur;
  }
  return true;
}

/// Checks f(T)/T strictly decreasing on a geometric grid of [lo, hi].
template <class F>
bool ratio_strictly_decreasing_on_grid(const F& f, double lo, double hi, int points = 1000) {
  double prev = f(lo) / lo;
  for (int i = 1; i < points; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const double cur = f(t) / t;
    if (!(cur < prev)) return false;
    prev = cur;
  }
  return true;
}

}  // namespace dioph
