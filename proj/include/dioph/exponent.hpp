#pragma once

// Exponent estimates from record tables.
//
// Each record k with a successor yields a pair (t_{k+1}, value_k): the
// measure function equals value_k on [t_k, t_{k+1}), so t^tau * psi(t) is
// largest just before the next record.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dioph/approx.hpp"
#include "dioph/errors.hpp"

namespace dioph {

enum class ExponentMethod { kTailSlope, kMaxRatio };

inline const char* to_string(ExponentMethod m) {
  return m == ExponentMethod::kTailSlope ? "tail_slope" : "max_ratio";
}

struct CaveatFlags {
  bool too_few_records = false;
  bool zero_value_subject = false;

  std::string str() const {
    std::string out;
    if (too_few_records) out += "TOO_FEW_RECORDS";
    if (zero_value_subject) out += std::string(out.empty() ? "" : "|") + "ZERO_VALUE_SUBJECT";
    return out;
  }
};

struct ExponentEstimate {
  // Unset when the subject contains nonzero integer points.
  std::optional<double> omega_hat;
  ExponentMethod method = ExponentMethod::kTailSlope;
  int window = 0;
  // RMS residual of the least-squares line through the window, log-log space.
  double residual = 0.0;
  int records_used = 0;
  CaveatFlags flags;
};

struct ExponentReport {
  ExponentEstimate tail_slope;
  ExponentEstimate max_ratio;
};

namespace detail {

struct LogPair {
  double log_t;
  double neg_log_value;
};

inline std::vector<LogPair> log_pairs(const RecordTable& table) {
  std::vector<LogPair> out;
  for (std::size_t k = 0; k + 1 < table.records.size(); ++k) {
    const double v = table.records[k].value;
    if (!(v > 0.0)) continue;
    out.push_back({std::log(static_cast<double>(table.records[k + 1].t)), -std::log(v)});
  }
  return out;
}

struct LineFit {
  double slope;
  double rms;
};

inline LineFit fit_line(const LogPair* first, std::size_t n) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += first[i].log_t;
    my += first[i].neg_log_value;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (first[i].log_t - mx) * (first[i].log_t - mx);
    sxy += (first[i].log_t - mx) * (first[i].neg_log_value - my);
  }
  if (!(sxx > 0)) throw InsufficientData("estimate_exponent: record times in the window coincide");
  const double slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = first[i].neg_log_value - (my + slope * (first[i].log_t - mx));
    ss += r * r;
  }
  return {slope, std::sqrt(ss / static_cast<double>(n))};
}

}  // namespace detail

/// min(10, max(2, records / 2)).
inline int default_window(const RecordTable& table) {
  return std::min(10, std::max(2, static_cast<int>(table.records.size()) / 2));
}

/// window <= 0 selects default_window. Windows longer than the available
/// pairs are shortened and flagged TOO_FEW_RECORDS.
inline ExponentEstimate estimate_exponent(const RecordTable& table,
                                          ExponentMethod method = ExponentMethod::kTailSlope, int window = 0) {
  ExponentEstimate est;
  est.method = method;
  if (table.contains_integer_points) {
    est.flags.zero_value_subject = true;
    return est;
  }
  if (window <= 0) window = default_window(table);
  if (window < 2) throw InsufficientData("estimate_exponent: window must be at least 2");
  const auto pairs = detail::log_pairs(table);
  if (pairs.size() < 2) {
    throw InsufficientData("estimate_exponent: " + std::to_string(table.records.size()) +
                           " records give fewer than 2 consecutive pairs");
  }
  if (static_cast<std::size_t>(window) > pairs.size()) {
    est.flags.too_few_records = true;
    window = static_cast<int>(pairs.size());
  }
  const detail::LogPair* first = pairs.data() + (pairs.size() - static_cast<std::size_t>(window));
  const auto fit = detail::fit_line(first, static_cast<std::size_t>(window));
  est.window = window;
  est.records_used = window + 1;
  est.residual = fit.rms;
  if (method == ExponentMethod::kTailSlope) {
    est.omega_hat = fit.slope;
  } else {
    double best = 0.0;
    for (int i = 0; i < window; ++i) best = std::max(best, first[i].neg_log_value / first[i].log_t);
    est.omega_hat = best;
  }
  return est;
}

inline ExponentReport estimate_exponents(const RecordTable& table, int window = 0) {
  return {estimate_exponent(table, ExponentMethod::kTailSlope, window),
          estimate_exponent(table, ExponentMethod::kMaxRatio, window)};
}

struct ProfilePoint {
  std::int64_t t;
  double scaled_value;
};

/// (t_k, t_{k+1}^tau * value_k) for every positive record with a successor.
inline std::vector<ProfilePoint> liminf_profile(const RecordTable& table, double tau) {
  std::vector<ProfilePoint> out;
  for (std::size_t k = 0; k + 1 < table.records.size(); ++k) {
    const auto& r = table.records[k];
    if (!(r.value > 0.0)) continue;
    out.push_back({r.t, std::pow(static_cast<double>(table.records[k + 1].t), tau) * r.value});
  }
  return out;
}

}  // namespace dioph
