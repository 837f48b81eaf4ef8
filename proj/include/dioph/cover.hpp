#pragma once

// Covering-count analytics for c-dimensional graphs inside an a-dimensional
// subspace near a b-dimensional subject in R^d: the local weights mu, their
// dyadic accumulations M, increments lambda, the weighted series, and the
// closed-form exponent bound and convergence classifier for power-log decay.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dioph/decay.hpp"
#include "dioph/errors.hpp"

namespace dioph {

struct CoverParams {
  int a = 0;
  int b = 0;
  int c = 0;
  int d = 0;
};

/// 0 for T < 1, else (T/psi)^(a-b) * max(1, (phi/psi)^(d-a)).
inline double mu(double t, const CoverParams& p, const DecayFunction& psi, const DecayFunction& phi) {
  if (t < 1.0) return 0.0;
  const double ps = psi(t);
  const double base = std::pow(t / ps, p.a - p.b);
  return base * std::max(1.0, std::pow(phi(t) / ps, p.d - p.a));
}

using MuFunction = std::function<double(double)>;

/// Arrays indexed by T = 0..t_max; index 0 holds M_0 = 0 and zero terms.
struct CoverProfile {
  CoverParams params;
  DecayFunction psi;
  DecayFunction phi;
  std::int64_t t_max = 0;
  std::vector<double> mu;
  std::vector<double> m;
  std::vector<double> lambda;
  std::vector<double> term;
  std::vector<double> partial_sum;
};

/// Series weight phi(T)^(a-c) / T^(a-c).
inline double series_weight(double t, const CoverParams& p, const DecayFunction& phi) {
  return std::pow(phi(t) / t, p.a - p.c);
}

/// M_T = sum_{j=0}^{floor(log2 T)} mu(T / 2^j) for T = 1..t_max, lambda_T =
/// M_T - M_{T-1}, and partial sums of lambda_T * series_weight(T). A custom
/// mu replaces the closed form (psi is still used for nothing else).
inline CoverProfile m_profile(std::int64_t t_max, const CoverParams& p, const DecayFunction& psi,
                              const DecayFunction& phi, const MuFunction& custom_mu = {}) {
  if (t_max < 1) throw EmptyRange("m_profile: T_max must be at least 1");
  CoverProfile out{p, psi, phi, t_max, {}, {}, {}, {}, {}};
  const auto n = static_cast<std::size_t>(t_max + 1);
  out.mu.assign(n, 0.0);
  out.m.assign(n, 0.0);
  out.lambda.assign(n, 0.0);
  out.term.assign(n, 0.0);
  out.partial_sum.assign(n, 0.0);
  auto weight = [&](double x) { return custom_mu ? custom_mu(x) : mu(x, p, psi, phi); };
  double running = 0.0;
  for (std::int64_t t = 1; t <= t_max; ++t) {
    const auto i = static_cast<std::size_t>(t);
    const int levels = std::bit_width(static_cast<std::uint64_t>(t));
    double total = 0.0;
    for (int j = 0; j < levels; ++j) total += weight(std::ldexp(static_cast<double>(t), -j));
    out.mu[i] = weight(static_cast<double>(t));
    out.m[i] = total;
    out.lambda[i] = out.m[i] - out.m[i - 1];
    out.term[i] = out.lambda[i] * series_weight(static_cast<double>(t), p, phi);
    running += out.term[i];
    out.partial_sum[i] = running;
  }
  return out;
}

/// sum_{T=1}^{W} lambda_T g(T) rewritten by partial summation as
/// sum_{T=1}^{W} (g(T) - g(T+1)) M_T + g(W+1) M_W.
inline double abel_sum(const std::vector<double>& m, std::int64_t w, const std::function<double(double)>& g) {
  double total = 0.0;
  for (std::int64_t t = 1; t <= w; ++t) {
    total += (g(static_cast<double>(t)) - g(static_cast<double>(t + 1))) * m[static_cast<std::size_t>(t)];
  }
  return total + g(static_cast<double>(w + 1)) * m[static_cast<std::size_t>(w)];
}

inline double direct_sum(const std::vector<double>& lambda, std::int64_t w, const std::function<double(double)>& g) {
  double total = 0.0;
  for (std::int64_t t = 1; t <= w; ++t) total += lambda[static_cast<std::size_t>(t)] * g(static_cast<double>(t));
  return total;
}

/// Upper bound on the exponent of almost every c-dimensional graph in A,
/// given the exponent omega of B:
/// (omega (d-b) + c - b) / (d - c) for c < b, else (omega (a-b) + c - b) / (a - c).
inline double theorem_bound(int a, int b, int c, int d, double omega) {
  if (c < b) {
    if (d == c) throw DegenerateDenominator("theorem_bound: c = d");
    return (omega * (d - b) + c - b) / static_cast<double>(d - c);
  }
  if (a == c) throw DegenerateDenominator("theorem_bound: c = a");
  return (omega * (a - b) + c - b) / static_cast<double>(a - c);
}

enum class Convergence { kConverges, kDiverges, kBoundaryConverges, kBoundaryDiverges };

inline const char* to_string(Convergence v) {
  switch (v) {
    case Convergence::kConverges: return "CONVERGES";
    case Convergence::kDiverges: return "DIVERGES";
    case Convergence::kBoundaryConverges: return "BOUNDARY_CONVERGES";
    case Convergence::kBoundaryDiverges: return "BOUNDARY_DIVERGES";
  }
  return "?";
}

inline constexpr double kThresholdTolerance = 1e-12;

/// Convergence of the weighted series for psi = T^-beta log^psi_log T and
/// phi = T^-gamma log^phi_log T.
inline Convergence classify_convergence(const CoverParams& p, double beta, double psi_log, double gamma,
                                        double phi_log) {
  const double threshold = theorem_bound(p.a, p.b, p.c, p.d, beta);
  if (gamma > threshold + kThresholdTolerance) return Convergence::kConverges;
  if (gamma < threshold - kThresholdTolerance) return Convergence::kDiverges;
  const double log_exponent = p.c < p.b ? phi_log * (p.d - p.c) - psi_log * (p.d - p.b)
                                        : phi_log * (p.a - p.c) - psi_log * (p.a - p.b);
  return log_exponent < -1.0 ? Convergence::kBoundaryConverges : Convergence::kBoundaryDiverges;
}

/// True when psi(T) <= T^(-b/(d-b)) at every grid point of [2, t_max].
inline bool psi_within_dirichlet(const CoverParams& p, const DecayFunction& psi, double t_max, int points = 1000) {
  if (t_max <= 2.0) return psi(2.0) <= std::pow(2.0, -static_cast<double>(p.b) / (p.d - p.b));
  for (int i = 0; i < points; ++i) {
    const double t = 2.0 * std::pow(t_max / 2.0, static_cast<double>(i) / (points - 1));
    if (psi(t) > std::pow(t, -static_cast<double>(p.b) / (p.d - p.b)) * (1 + 1e-12)) return false;
  }
  return true;
}

}  // namespace dioph
