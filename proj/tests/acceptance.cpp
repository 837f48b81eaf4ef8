// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dioph/harness/runs.hpp"
#include "oracles.hpp"

using namespace dioph;
using namespace dioph::harness;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v) { return format_number(std::round(v * 1e4) / 1e4); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("dioph_acceptance_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

Eigen::MatrixXd seeded_matrix(int rows, int cols, std::uint64_t seed) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      m(i, j) = 2.0 * counter_uniform(seed, static_cast<std::uint64_t>(i * cols + j)) - 1.0;
    }
  return m;
}

// ---------------------------------------------------------------------------
// 1. Optimized measure functions against exhaustive scans.

template <class Subject, class Eval>
bool agrees_with_brute_force(const Subject& s, Eval&& optimized, std::string& why) {
  constexpr std::int64_t kMaxT = 60;
  constexpr double kTol = 1e-9;
  const auto profile = brute_force_profile(s, kMaxT);
  for (std::int64_t t = 1; t <= kMaxT; ++t) {
    for (auto conv : {NormConvention::kInclusiveUpper, NormConvention::kStrictUpper}) {
      const std::int64_t r = conv == NormConvention::kStrictUpper ? t - 1 : t;
      if (r < 1) {
        bool threw = false;
        try {
          optimized(t, conv);
        } catch (const EmptyRange&) {
          threw = true;
        }
        if (!threw) {
          why = "strict t=1 did not report an empty range";
          return false;
        }
        continue;
      }
      const Evaluation got = optimized(t, conv);
      const Evaluation& want = profile[static_cast<std::size_t>(r)];
      if (std::fabs(got.value - want.value) > kTol || got.witness != want.witness) {
        why = "mismatch at t=" + std::to_string(t) + " " + to_string(conv);
        return false;
      }
    }
  }
  // Spot-check the single-t entry point against the profile.
  if (brute_force_psi(s, kMaxT).value != profile[kMaxT].value) {
    why = "brute_force_psi disagrees with its profile";
    return false;
  }
  return true;
}

Verdict criterion_oracle_equivalence() {
  Verdict v;
  int subspaces = 0, matrices = 0;
  std::string why;
  const std::pair<int, int> shapes[] = {{2, 1}, {3, 1}, {3, 2}};
  for (int i = 0; i < 50 && v.pass; ++i) {
    const auto [d, k] = shapes[i % 3];
    const Subspace s = orthonormal_subspace(seeded_matrix(d, k, 1000 + static_cast<std::uint64_t>(i)));
    v.pass = agrees_with_brute_force(
        s, [&](std::int64_t t, NormConvention c) { return psi_subspace(s, t, c); }, why);
    ++subspaces;
  }
  const std::pair<int, int> theta_shapes[] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (int i = 0; i < 20 && v.pass; ++i) {
    const auto [rows, cols] = theta_shapes[i % 4];
    const ThetaMatrix theta = sample_theta(rows, cols, 1.0, 2000 + static_cast<std::uint64_t>(i));
    v.pass = agrees_with_brute_force(
        theta,
        [&](std::int64_t t, NormConvention c) {
          if (c == NormConvention::kStrictUpper) {
            if (t < 2) throw EmptyRange("strict");
            return psi_theta(theta, t - 1);
          }
          return psi_theta(theta, t);
        },
        why);
    ++matrices;
  }
  v.detail = std::to_string(subspaces) + " subspaces, " + std::to_string(matrices) +
             " matrices, t <= 60, both conventions" + (v.pass ? "" : "; " + why);
  return v;
}

// ---------------------------------------------------------------------------
// 2. Golden line against its continued fraction.

Verdict criterion_golden_line() {
  Verdict v;
  const long double g = (1.0L + std::sqrt(5.0L)) / 2.0L;
  const auto a = oracle::partial_quotients(g, 45);
  // Convergent numerators p_k, computed by the recurrence.
  std::vector<long double> p{static_cast<long double>(a[0])}, q{1.0L};
  long double p_prev = 1, q_prev = 0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    const long double pn = a[k] * p.back() + p_prev, qn = a[k] * q.back() + q_prev;
    p_prev = p.back();
    q_prev = q.back();
    p.push_back(pn);
    q.push_back(qn);
  }
  std::vector<std::int64_t> expected;
  for (auto x : p)
    if (x <= 10000) expected.push_back(static_cast<std::int64_t>(x));

  const Subspace line = golden_line();
  const RecordTable small = record_table(line, 10000);
  std::vector<std::int64_t> times;
  for (const auto& r : small.records) times.push_back(r.t);
  const bool fib = times == expected;

  const RecordTable big = record_table(line, 1000000);
  const auto est = estimate_exponent(big);
  const double slope = est.omega_hat.value_or(-1);
  const bool slope_ok = slope >= 0.95 && slope <= 1.05;

  // Limit of next-record time times record value, from deep convergents.
  const std::size_t deep = 40;
  const long double limit = p[deep + 1] * std::fabs(q[deep] * g - p[deep]) / std::sqrt(1.0L + g * g);
  const double constant = static_cast<double>(limit);
  double lo = 1e300, hi = 0;
  for (const auto& pt : liminf_profile(big, 1.0)) {
    if (pt.t < 5) continue;
    lo = std::min(lo, pt.scaled_value);
    hi = std::max(hi, pt.scaled_value);
  }
  const bool profile_ok = lo >= constant / 3 && hi <= constant * 3;
  v.pass = fib && slope_ok && profile_ok;
  v.detail = std::string("record times ") + (fib ? "are" : "are NOT") + " the convergent numerators (" +
             std::to_string(expected.size()) + " up to 1e4); tail slope at 1e6 = " + fmt(slope) +
             " in [0.95, 1.05]; profile at tau=1 in [" + fmt(lo) + ", " + fmt(hi) + "], oracle constant " +
             fmt(constant);
  return v;
}

// ---------------------------------------------------------------------------
// 3. Exponents of random matrices.

Verdict criterion_random_exponents() {
  Verdict v;
  auto median_slope = [](int rows, int cols, std::uint64_t base) {
    std::vector<double> slopes;
    for (int i = 0; i < 20; ++i) {
      const ThetaMatrix theta = sample_theta(rows, cols, 1.0, base + static_cast<std::uint64_t>(i));
      const auto est = estimate_exponent(record_table(theta, 100000));
      slopes.push_back(est.omega_hat.value_or(std::numeric_limits<double>::infinity()));
    }
    return median(slopes);
  };
  const double column = median_slope(2, 1, 3000);
  const double row = median_slope(1, 2, 4000);
  v.pass = column >= 0.4 && column <= 0.65 && row >= 1.7 && row <= 2.3;
  v.detail = "median 2x1 = " + fmt(column) + " in [0.4, 0.65]; median 1x2 = " + fmt(row) + " in [1.7, 2.3]";
  return v;
}

// ---------------------------------------------------------------------------
// 4. Exponent bound on sampled graphs, with a rational control.

Verdict criterion_theorem_bound() {
  Verdict v;
  const double exact = theorem_bound(3, 1, 2, 4, 1.0 / 3.0);
  const bool exact_ok = std::fabs(exact - 5.0 / 3.0) <= 0.15;

  ExperimentConfig cfg;
  cfg.d = 4;
  cfg.a = 3;
  cfg.b = 1;
  cfg.c = 2;
  cfg.kind = SubjectKind::kAlgebraic;
  cfg.samples = 50;
  cfg.t_max = 10000;
  cfg.slack = 0.25;
  cfg.threshold = 0.9;
  cfg.parallelism = 0;
  cfg.out_dir = scratch("bound").string();
  std::ostringstream log;
  const auto algebraic = run_verify_theorem(cfg, log);
  const double fraction = algebraic.summary["fraction_within_bound"].get<double>();
  const double algebraic_median = algebraic.summary["median_omega_hat"].get<double>();
  const double bound = algebraic.summary["bound"].get<double>();

  cfg.kind = SubjectKind::kRational;
  cfg.out_dir = scratch("bound_rational").string();
  const auto rational = run_verify_theorem(cfg, log);
  const double rational_median = rational.summary["median_omega_hat"].get<double>();

  v.pass = exact_ok && fraction >= 0.9 && rational_median > algebraic_median;
  v.detail = "bound at omega=1/3 is " + fmt(exact) + "; measured bound " + fmt(bound) + ", within bound+0.25: " +
             fmt(fraction) + " >= 0.9; median omega_hat " + fmt(algebraic_median) + " < rational control " +
             fmt(rational_median);
  return v;
}

// ---------------------------------------------------------------------------
// 5. Cover analytics identities and the classifier.

// Partial sums by recomputing every M_T from its dyadic definition.
std::vector<double> series_oracle(std::int64_t w, const CoverParams& p, const DecayFunction& psi,
                                  const DecayFunction& phi) {
  std::vector<double> sums(static_cast<std::size_t>(w + 1), 0.0);
  double prev_m = 0, total = 0;
  for (std::int64_t t = 1; t <= w; ++t) {
    double m = 0;
    for (double x = static_cast<double>(t); x >= 1.0; x /= 2.0) m += mu(x, p, psi, phi);
    total += (m - prev_m) * std::pow(phi(static_cast<double>(t)) / static_cast<double>(t), p.a - p.c);
    prev_m = m;
    sums[static_cast<std::size_t>(t)] = total;
  }
  return sums;
}

Verdict criterion_analytics() {
  Verdict v;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  const CoverParams worked{3, 1, 2, 4};
  const auto phi = DecayFunction::power(1.8);
  auto g = [&](double t) { return series_weight(t, worked, phi); };
  double worst_telescoping = 0, worst_abel = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t w = 100 + 7 * trial;
    std::vector<double> values(static_cast<std::size_t>(w + 1));
    for (auto& x : values) x = u(gen);
    const auto prof = m_profile(w, worked, phi, phi, [&](double x) { return values[static_cast<std::size_t>(x)]; });
    double running = 0;
    for (std::int64_t t = 1; t <= w; ++t) {
      running += prof.lambda[static_cast<std::size_t>(t)];
      const double m = prof.m[static_cast<std::size_t>(t)];
      worst_telescoping = std::max(worst_telescoping, std::fabs(running - m) / std::max(1.0, m));
    }
    const double direct = direct_sum(prof.lambda, w, g);
    worst_abel = std::max(worst_abel, std::fabs(abel_sum(prof.m, w, g) - direct) / std::fabs(direct));
  }

  bool branches = true;
  for (double t : {1.0, 3.0, 40.0, 1e5}) {
    const auto psi = DecayFunction::power(0.7, 0.9);
    branches = branches && mu(t, worked, psi, psi) == std::pow(t / psi(t), worked.a - worked.b);
  }

  struct Tuple {
    CoverParams p;
    double beta;
  };
  const Tuple tuples[] = {{{3, 2, 1, 4}, 1.0}, {{4, 3, 1, 5}, 0.5}, {{4, 2, 1, 5}, 0.8},
                          {{3, 1, 2, 4}, 1.0 / 3.0}, {{4, 2, 3, 5}, 0.6}, {{4, 1, 2, 5}, 0.4}};
  int agree = 0, total = 0;
  std::string disagreements;
  for (const auto& tuple : tuples) {
    const double threshold = theorem_bound(tuple.p.a, tuple.p.b, tuple.p.c, tuple.p.d, tuple.beta);
    for (double offset : {0.25, -0.25}) {
      const double gamma = std::max(0.05, threshold + offset);
      const auto verdict = classify_convergence(tuple.p, tuple.beta, 0.0, gamma, 0.0);
      const auto sums = series_oracle(100000, tuple.p, DecayFunction::power(tuple.beta), DecayFunction::power(gamma));
      const double ratio = (sums[100000] - sums[10000]) / (sums[10000] - sums[1000]);
      const bool converges = ratio < 1.0;
      ++total;
      if (converges == (verdict == Convergence::kConverges)) ++agree;
      else disagreements += " (" + std::to_string(tuple.p.a) + std::to_string(tuple.p.b) + std::to_string(tuple.p.c) +
                            std::to_string(tuple.p.d) + " gamma " + fmt(gamma) + ")";
    }
  }
  v.pass = worst_telescoping <= 1e-12 && worst_abel <= 1e-10 && branches && agree == total;
  v.detail = "telescoping err " + format_number(worst_telescoping) + " <= 1e-12; partial summation rel err " +
             format_number(worst_abel) + " <= 1e-10; branches " + (branches ? "agree" : "DISAGREE") +
             "; classifier matches summation on " + std::to_string(agree) + "/" + std::to_string(total) + " tuples" +
             disagreements;
  return v;
}

// ---------------------------------------------------------------------------
// 6. At most one lattice point per shifted half box.

Verdict criterion_lemma2() {
  Verdict v;
  ExperimentConfig cfg;
  cfg.subject = "golden";
  cfg.lemma_psi = DecayFunction{0.2, 1.0, 0.0};
  cfg.lemma_t = {10, 100, 1000};
  cfg.shifts = 1000;
  cfg.scale = 0.5;
  cfg.out_dir = scratch("lemma2").string();
  std::ostringstream log;
  const auto out = run_lemma2(cfg, log);
  const auto max_count = out.summary["max_count"].get<std::size_t>();
  const bool origin_only = out.summary["origin_only"].get<bool>();

  cfg.subject = "rational:1,2";
  bool rejected = false;
  try {
    run_lemma2(cfg, log);
  } catch (const PsiNotValid&) {
    rejected = true;
  }
  v.pass = max_count <= 1 && origin_only && rejected && out.exit_code == kExitOk;
  v.detail = "max count " + std::to_string(max_count) + " over 3000 shifted half boxes; unscaled box " +
             (origin_only ? "holds only 0" : "holds other points") + "; rational line " +
             (rejected ? "rejected" : "NOT rejected");
  return v;
}

// ---------------------------------------------------------------------------
// 7. Output independent of thread count.

Verdict criterion_determinism() {
  Verdict v;
  ExperimentConfig cfg;
  cfg.samples = 50;
  cfg.t_max = 10000;
  std::ostringstream log;
  const auto serial_dir = scratch("det1"), parallel_dir = scratch("det8");
  cfg.parallelism = 1;
  cfg.out_dir = serial_dir.string();
  run_verify_theorem(cfg, log);
  cfg.parallelism = 8;
  cfg.out_dir = parallel_dir.string();
  run_verify_theorem(cfg, log);
  const auto a = csv_payload(serial_dir / "samples.csv");
  const auto b = csv_payload(parallel_dir / "samples.csv");
  v.pass = !a.empty() && a == b;
  v.detail = std::string("samples.csv payload ") + (v.pass ? "identical" : "DIFFERS") + " for parallelism 1 and 8 (" +
             std::to_string(a.size()) + " bytes)";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {1, "oracle equivalence", 120, criterion_oracle_equivalence},
      {2, "golden line", 60, criterion_golden_line},
      {3, "random matrix exponents", 600, criterion_random_exponents},
      {4, "exponent bound on sampled graphs", 1800, criterion_theorem_bound},
      {5, "analytics identities", 60, criterion_analytics},
      {6, "lattice points in shifted boxes", 60, criterion_lemma2},
      {7, "determinism", 0, criterion_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
    const bool pass = v.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s; %.1f s", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    if (c.limit_seconds > 0) std::printf(" (limit %.0f s)", c.limit_seconds);
    std::printf("\n");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
