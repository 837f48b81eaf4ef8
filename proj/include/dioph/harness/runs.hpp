#pragma once

// The five experiment commands. Each writes its files under cfg.out_dir,
// prints a short report to `log` and returns the process exit code together
// with the summary written to summary.json.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "dioph/approx.hpp"
#include "dioph/constructions.hpp"
#include "dioph/cover.hpp"
#include "dioph/exponent.hpp"
#include "dioph/harness/config.hpp"
#include "dioph/harness/io.hpp"
#include "dioph/harness/subject.hpp"
#include "dioph/rng.hpp"

namespace dioph::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitBudgetExceeded = 3,
  kExitBelowThreshold = 4,
  kExitHypothesisViolated = 5,
};

// The subject does not satisfy the decay hypothesis being tested.
class PsiNotValid : public Error {
 public:
  using Error::Error;
};

struct RunOutcome {
  int exit_code = kExitOk;
  Json summary;
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline Json decay_json(const DecayFunction& f) {
  return Json{{"rho", f.rho}, {"gamma", f.gamma}, {"logpow", f.logpow}};
}

inline Json config_json(const ExperimentConfig& cfg) {
  std::vector<double> ts = cfg.lemma_t;
  return Json{{"d", cfg.d},
              {"a", cfg.a},
              {"b", cfg.b},
              {"c", cfg.c},
              {"kind", to_string(cfg.kind)},
              {"theta_bound", cfg.theta_bound},
              {"seed", cfg.seed},
              {"t_max", cfg.t_max},
              {"subject_t_max", cfg.subject_t_max},
              {"convention", to_string(cfg.convention)},
              {"node_budget", cfg.node_budget},
              {"parallelism", cfg.parallelism},
              {"samples", cfg.samples},
              {"method", to_string(cfg.method)},
              {"window", cfg.window},
              {"slack", cfg.slack},
              {"threshold", cfg.threshold},
              {"subject", cfg.subject},
              {"psi", decay_json(cfg.psi)},
              {"phi", decay_json(cfg.phi)},
              {"series_t_max", cfg.series_t_max},
              {"lemma_psi", decay_json(cfg.lemma_psi)},
              {"lemma_t", ts},
              {"shifts", cfg.shifts},
              {"scale", cfg.scale}};
}

inline Json estimate_json(const ExponentEstimate& e) {
  return Json{{"method", to_string(e.method)},
              {"omega_hat", e.omega_hat ? json_number(*e.omega_hat) : Json(nullptr)},
              {"window", e.window},
              {"residual", e.residual},
              {"records_used", e.records_used},
              {"flags", e.flags.str()}};
}

struct Measured {
  RecordTable table;
  bool budget_exceeded = false;
};

inline Measured measure(const Subject& subject, std::int64_t t_max, const ExperimentConfig& cfg, int parallelism) {
  Measured m;
  SearchOptions opts{cfg.node_budget, parallelism};
  try {
    if (subject.is_subspace()) {
      m.table = record_table(std::get<Subspace>(subject.value), t_max, cfg.convention, opts, subject.label);
    } else {
      m.table = record_table(std::get<ThetaMatrix>(subject.value), t_max, cfg.convention, opts, subject.label);
    }
  } catch (const RecordBudgetExceeded& e) {
    m.table = e.partial();
    m.table.subject = subject.label;
    m.budget_exceeded = true;
  }
  return m;
}

/// Estimate with the configured method; nullopt with a reason when the
/// table does not support one.
inline std::optional<ExponentEstimate> try_estimate(const RecordTable& table, ExponentMethod method, int window,
                                                    std::string* reason = nullptr) {
  try {
    return estimate_exponent(table, method, window);
  } catch (const InsufficientData& e) {
    if (reason) *reason = e.what();
    return std::nullopt;
  }
}

inline Json exponent_block(const RecordTable& table, int window) {
  Json out = Json::object();
  for (auto method : {ExponentMethod::kTailSlope, ExponentMethod::kMaxRatio}) {
    std::string reason;
    auto est = try_estimate(table, method, window, &reason);
    out[to_string(method)] = est ? estimate_json(*est) : Json{{"error", reason}};
  }
  return out;
}

inline Json profile_extremes(const RecordTable& table, double tau) {
  const auto profile = liminf_profile(table, tau);
  if (profile.empty()) return nullptr;
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& p : profile) {
    lo = std::min(lo, p.scaled_value);
    hi = std::max(hi, p.scaled_value);
  }
  return Json{{"tau", tau}, {"min", lo}, {"max", hi}, {"last", profile.back().scaled_value}};
}

inline std::filesystem::path prepare_out_dir(const ExperimentConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_records_csv(const std::filesystem::path& path, const RecordTable& table) {
  CsvWriter csv(path, "t,value,witness,log10_t,log10_value");
  for (const auto& r : table.records) {
    csv.row({std::to_string(r.t), format_number(r.value), "\"" + join_ints(r.witness) + "\"",
             format_number(std::log10(static_cast<double>(r.t))), format_number(std::log10(r.value))});
  }
}

inline Json table_json(const RecordTable& table, bool budget_exceeded) {
  return Json{{"subject", table.subject},
              {"convention", to_string(table.convention)},
              {"records", table.records.size()},
              {"t_max_scanned", table.t_max_scanned},
              {"contains_integer_points", table.contains_integer_points},
              {"budget_exceeded", budget_exceeded}};
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Record table of the configured subject to records.csv.
inline RunOutcome run_records(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  detail::Stopwatch clock;
  const Subject subject = parse_subject(cfg.subject, cfg);
  const auto dir = detail::prepare_out_dir(cfg);
  auto measured = detail::measure(subject, cfg.t_max, cfg, cfg.parallelism);
  detail::write_records_csv(dir / "records.csv", measured.table);

  RunOutcome out;
  out.exit_code = measured.budget_exceeded ? kExitBudgetExceeded : kExitOk;
  Json& s = out.summary;
  s["command"] = "records";
  s["config"] = detail::config_json(cfg);
  s["table"] = detail::table_json(measured.table, measured.budget_exceeded);
  s["exponent"] = detail::exponent_block(measured.table, cfg.window);
  if (auto est = detail::try_estimate(measured.table, cfg.method, cfg.window); est && est->omega_hat) {
    s["liminf_profile"] = detail::profile_extremes(measured.table, *est->omega_hat);
  }
  s["seconds"] = clock.seconds();
  write_json(dir / "summary.json", s);

  log << "records: " << measured.table.records.size() << " up to t = " << measured.table.t_max_scanned;
  if (measured.table.contains_integer_points) log << " (contains_integer_points=true)";
  if (measured.budget_exceeded) log << " (node budget exceeded, partial output)";
  log << '\n';
  return out;
}

/// Exponent estimates of the configured subject, both methods.
inline RunOutcome run_exponent(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  detail::Stopwatch clock;
  const Subject subject = parse_subject(cfg.subject, cfg);
  const auto dir = detail::prepare_out_dir(cfg);
  auto measured = detail::measure(subject, cfg.t_max, cfg, cfg.parallelism);

  RunOutcome out;
  out.exit_code = measured.budget_exceeded ? kExitBudgetExceeded : kExitOk;
  Json& s = out.summary;
  s["command"] = "exponent";
  s["config"] = detail::config_json(cfg);
  s["table"] = detail::table_json(measured.table, measured.budget_exceeded);
  s["exponent"] = detail::exponent_block(measured.table, cfg.window);
  s["seconds"] = clock.seconds();
  write_json(dir / "summary.json", s);

  for (auto method : {ExponentMethod::kTailSlope, ExponentMethod::kMaxRatio}) {
    std::string reason;
    auto est = detail::try_estimate(measured.table, method, cfg.window, &reason);
    log << to_string(method) << ": ";
    if (!est) log << "unavailable (" << reason << ")";
    else if (!est->omega_hat) log << "unset [" << est->flags.str() << "]";
    else log << format_number(*est->omega_hat) << " (window " << est->window << ")";
    log << '\n';
  }
  return out;
}

struct SampleResult {
  int sample_id = 0;
  std::vector<double> theta;
  std::optional<double> omega_hat;
  double bound = 0;
  double slack = 0;
  bool within_bound = false;
  bool included = false;
  std::size_t records_count = 0;
  std::int64_t t_max_scanned = 0;
  std::string flags;
};

inline std::string join_flags(std::initializer_list<std::pair<bool, const char*>> flags) {
  std::string out;
  for (const auto& [on, name] : flags) {
    if (!on) continue;
    if (!out.empty()) out += '|';
    out += name;
  }
  return out;
}

inline SampleResult evaluate_sample(const ExperimentScenario& scenario, int id, double bound,
                                    const ExperimentConfig& cfg) {
  SampleResult r;
  r.sample_id = id;
  r.bound = bound;
  r.slack = cfg.slack;
  const ThetaMatrix theta = sample_theta(scenario.a - scenario.c, scenario.c, scenario.theta_bound,
                                         cfg.seed ^ static_cast<std::uint64_t>(id));
  for (int i = 0; i < theta.rows(); ++i)
    for (int j = 0; j < theta.cols(); ++j) r.theta.push_back(theta(i, j));
  const Subject subject{"sample " + std::to_string(id), graph_subspace(theta, scenario.outer)};
  const auto measured = detail::measure(subject, cfg.t_max, cfg, 1);
  r.records_count = measured.table.records.size();
  r.t_max_scanned = measured.table.t_max_scanned;
  std::string reason;
  const auto est = detail::try_estimate(measured.table, cfg.method, cfg.window, &reason);
  const bool zero = measured.table.contains_integer_points;
  if (est && est->omega_hat) r.omega_hat = *est->omega_hat;
  if (zero) r.omega_hat = std::numeric_limits<double>::infinity();
  r.included = r.records_count >= 3;
  r.within_bound = r.omega_hat && *r.omega_hat <= bound + cfg.slack;
  r.flags = join_flags({{est && est->flags.too_few_records, "TOO_FEW_RECORDS"},
                        {zero, "ZERO_VALUE_SUBJECT"},
                        {!est && !zero, "INSUFFICIENT_DATA"},
                        {measured.budget_exceeded, "BUDGET_EXCEEDED"},
                        {!r.included, "EXCLUDED"}});
  return r;
}

/// Measures the exponent of B, converts it into the bound for c-dimensional
/// graphs in A, and checks sampled graphs against bound + slack.
inline RunOutcome run_verify_theorem(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  detail::Stopwatch clock;
  const ExperimentScenario scenario = build_scenario(cfg.d, cfg.a, cfg.b, cfg.c, cfg.kind, cfg.seed, cfg.theta_bound);
  const auto dir = detail::prepare_out_dir(cfg);

  const Subject inner{std::string("B:") + to_string(cfg.kind), scenario.inner};
  const auto subject_table = detail::measure(inner, cfg.subject_t_max, cfg, cfg.parallelism);
  std::string reason;
  const auto subject_est = detail::try_estimate(subject_table.table, cfg.method, cfg.window, &reason);
  if (!subject_est) throw InsufficientData("subject exponent: " + reason);
  const double bound = subject_est->omega_hat
                           ? theorem_bound(cfg.a, cfg.b, cfg.c, cfg.d, *subject_est->omega_hat)
                           : std::numeric_limits<double>::infinity();
  const double subject_seconds = clock.seconds();

  std::vector<SampleResult> results(static_cast<std::size_t>(cfg.samples));
  dioph::detail::parallel_chunks(dioph::detail::resolve_parallelism(cfg.parallelism), cfg.samples, [&](int id) {
    results[static_cast<std::size_t>(id)] = evaluate_sample(scenario, id, bound, cfg);
  });

  CsvWriter csv(dir / "samples.csv",
                "sample_id,theta_rowmajor,omega_hat,bound,slack,within_bound,records_count,t_max_scanned,flags");
  int included = 0, within = 0, budget_hits = 0;
  std::vector<double> omegas;
  for (const auto& r : results) {
    std::string theta;
    for (std::size_t i = 0; i < r.theta.size(); ++i) theta += (i ? " " : "") + format_number(r.theta[i]);
    csv.row({std::to_string(r.sample_id), "\"" + theta + "\"", r.omega_hat ? format_number(*r.omega_hat) : "nan",
             format_number(r.bound), format_number(r.slack), r.within_bound ? "true" : "false",
             std::to_string(r.records_count), std::to_string(r.t_max_scanned), r.flags});
    if (r.flags.find("BUDGET_EXCEEDED") != std::string::npos) ++budget_hits;
    if (!r.included) continue;
    ++included;
    if (r.within_bound) ++within;
    if (r.omega_hat) omegas.push_back(*r.omega_hat);
  }
  const double fraction = included ? static_cast<double>(within) / included : 0.0;
  const bool pass = included > 0 && fraction >= cfg.threshold;

  RunOutcome out;
  out.exit_code = pass ? kExitOk : kExitBelowThreshold;
  Json& s = out.summary;
  s["command"] = "verify-theorem";
  s["config"] = detail::config_json(cfg);
  s["subject"] = Json{{"table", detail::table_json(subject_table.table, subject_table.budget_exceeded)},
                      {"estimate", detail::estimate_json(*subject_est)}};
  s["bound"] = json_number(bound);
  s["bound_is_infinite"] = std::isinf(bound);
  s["samples_included"] = included;
  s["samples_within_bound"] = within;
  s["samples_budget_exceeded"] = budget_hits;
  s["fraction_within_bound"] = fraction;
  s["median_omega_hat"] = json_number(detail::median(omegas));
  s["verdict"] = pass ? "pass" : "fail";
  s["seconds"] = Json{{"subject", subject_seconds}, {"total", clock.seconds()}};
  write_json(dir / "summary.json", s);

  log << "subject omega_hat = "
      << (subject_est->omega_hat ? format_number(*subject_est->omega_hat) : std::string("unset (rational)"))
      << ", bound = " << format_number(bound) << " + slack " << format_number(cfg.slack) << '\n'
      << "within bound: " << within << "/" << included << " = " << format_number(fraction)
      << ", median omega_hat = " << format_number(detail::median(omegas)) << " -> " << (pass ? "pass" : "fail")
      << '\n';
  return out;
}

/// Rows of profile.csv: every T up to 1000, then about 200 per decade, and
/// always the last T.
inline std::vector<std::int64_t> profile_rows(std::int64_t t_max, bool all) {
  std::vector<std::int64_t> rows;
  for (std::int64_t t = 1; t <= std::min<std::int64_t>(t_max, all ? t_max : 1000); ++t) rows.push_back(t);
  if (all || t_max <= 1000) return rows;
  for (int k = 1;; ++k) {
    const auto t = static_cast<std::int64_t>(std::llround(std::pow(10.0, 3.0 + k / 200.0)));
    if (t >= t_max) break;
    if (t > rows.back()) rows.push_back(t);
  }
  rows.push_back(t_max);
  return rows;
}

/// Dyadic cover profile, weighted series and closed-form classification.
inline RunOutcome run_series(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  detail::Stopwatch clock;
  const CoverParams params{cfg.a, cfg.b, cfg.c, cfg.d};
  if (!(1 <= cfg.b && cfg.b <= cfg.a && cfg.a < cfg.d)) throw ConfigError("series: need 1 <= b <= a < d");
  const auto dir = detail::prepare_out_dir(cfg);
  const auto profile = m_profile(cfg.series_t_max, params, cfg.psi, cfg.phi);
  const auto verdict = classify_convergence(params, cfg.psi.gamma, cfg.psi.logpow, cfg.phi.gamma, cfg.phi.logpow);

  CsvWriter csv(dir / "profile.csv", "T,mu,M,lambda,term,partial_sum");
  for (auto t : profile_rows(cfg.series_t_max, cfg.profile_all_rows)) {
    const auto i = static_cast<std::size_t>(t);
    csv.row({std::to_string(t), format_number(profile.mu[i]), format_number(profile.m[i]),
             format_number(profile.lambda[i]), format_number(profile.term[i]), format_number(profile.partial_sum[i])});
  }

  const bool boundary = verdict == Convergence::kBoundaryConverges || verdict == Convergence::kBoundaryDiverges;
  auto sum_at = [&](std::int64_t t) { return profile.partial_sum[static_cast<std::size_t>(t)]; };
  const std::int64_t t1 = cfg.series_t_max / 10, t2 = cfg.series_t_max / 100;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double growth = t1 >= 1 ? sum_at(cfg.series_t_max) / sum_at(t1) : nan;
  // Ratio of the last two decade increments; below 1 the tail is shrinking.
  const double increment_ratio = t2 >= 1 ? (sum_at(cfg.series_t_max) - sum_at(t1)) / (sum_at(t1) - sum_at(t2)) : nan;
  std::string diagnosis;
  if (boundary) diagnosis = "numerically undecidable";
  else if (increment_ratio < 1.0) diagnosis = "decade increments shrinking";
  else if (increment_ratio >= 1.0) diagnosis = "decade increments not shrinking";
  else diagnosis = "range too short to diagnose";

  std::vector<std::string> warnings;
  if (!psi_within_dirichlet(params, cfg.psi, static_cast<double>(cfg.series_t_max))) {
    warnings.push_back("psi exceeds T^(-b/(d-b)) somewhere on [2, T_max]");
  }
  for (const auto& [name, f] : {std::pair{"psi", cfg.psi}, std::pair{"phi", cfg.phi}}) {
    if (!nonincreasing_on_grid(f, 2.0, static_cast<double>(std::max<std::int64_t>(cfg.series_t_max, 3)))) {
      warnings.push_back(std::string(name) + " is not nonincreasing on [2, T_max]");
    }
    if (!ratio_strictly_decreasing_on_grid(f, 2.0, static_cast<double>(std::max<std::int64_t>(cfg.series_t_max, 3)))) {
      warnings.push_back(std::string(name) + "(T)/T is not strictly decreasing on [2, T_max]");
    }
  }

  RunOutcome out;
  Json& s = out.summary;
  s["command"] = "series";
  s["config"] = detail::config_json(cfg);
  s["classification"] = to_string(verdict);
  s["threshold_gamma"] = theorem_bound(cfg.a, cfg.b, cfg.c, cfg.d, cfg.psi.gamma);
  s["partial_sum"] = profile.partial_sum.back();
  s["growth_last_decade"] = json_number(growth);
  s["decade_increment_ratio"] = json_number(increment_ratio);
  s["diagnosis"] = diagnosis;
  s["warnings"] = warnings;
  s["seconds"] = clock.seconds();
  write_json(dir / "summary.json", s);

  log << to_string(verdict) << " (" << diagnosis << "; partial sum " << format_number(profile.partial_sum.back())
      << ", growth over last decade " << format_number(growth) << ", decade increment ratio "
      << format_number(increment_ratio) << ")\n";
  for (const auto& w : warnings) log << "warning: " << w << '\n';
  return out;
}

/// Lattice points of half-scale approximation boxes around a badly
/// approximable subject: at most one per shifted copy.
inline RunOutcome run_lemma2(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  detail::Stopwatch clock;
  const Subject subject = parse_subject(cfg.subject, cfg);
  if (!subject.is_subspace()) throw ConfigError("lemma2: subject must be a subspace");
  const Subspace& b = std::get<Subspace>(subject.value);
  const auto dir = detail::prepare_out_dir(cfg);
  const int d = b.ambient_dim();
  const double largest = *std::max_element(cfg.lemma_t.begin(), cfg.lemma_t.end());

  // The decay must lie below the measure function on the tested range.
  const auto measured = detail::measure(subject, std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(largest))),
                                        cfg, cfg.parallelism);
  if (measured.budget_exceeded) throw BudgetExceeded("lemma2: record table exceeded node budget");
  for (const auto& r : measured.table.records) {
    if (r.value < cfg.lemma_psi(static_cast<double>(r.t))) {
      throw PsiNotValid("lemma2: record at t = " + std::to_string(r.t) + " has value " + format_number(r.value) +
                        " < psi(t) = " + format_number(cfg.lemma_psi(static_cast<double>(r.t))));
    }
  }

  SearchOptions opts{cfg.node_budget, 1};
  CsvWriter csv(dir / "lemma2.csv", "T,shifts,max_count,shifts_with_points,origin_only");
  std::size_t overall_max = 0;
  bool all_origin_only = true;
  Json per_t = Json::array();
  for (double t : cfg.lemma_t) {
    std::size_t max_count = 0;
    int nonempty = 0;
    Eigen::VectorXd shift(d);
    for (int s = 0; s < cfg.shifts; ++s) {
      for (int i = 0; i < d; ++i) {
        shift[i] = counter_uniform(cfg.seed, static_cast<std::uint64_t>(s) * static_cast<std::uint64_t>(d) +
                                                 static_cast<std::uint64_t>(i));
      }
      const auto pts = omega_lattice_points(b, cfg.lemma_psi, t, shift, cfg.scale, opts);
      max_count = std::max(max_count, pts.size());
      if (!pts.empty()) ++nonempty;
    }
    const auto origin = omega_lattice_points(b, cfg.lemma_psi, t, Eigen::VectorXd::Zero(d), 1.0, opts);
    const bool origin_only = origin.size() == 1 && dioph::detail::is_zero(origin.front());
    all_origin_only = all_origin_only && origin_only;
    overall_max = std::max(overall_max, max_count);
    csv.row({format_number(t), std::to_string(cfg.shifts), std::to_string(max_count), std::to_string(nonempty),
             origin_only ? "true" : "false"});
    per_t.push_back(Json{{"T", t}, {"max_count", max_count}, {"shifts_with_points", nonempty},
                         {"origin_only", origin_only}});
    log << "T = " << format_number(t) << ": max count " << max_count << " over " << cfg.shifts << " shifts, "
        << (origin_only ? "unscaled box holds only the origin" : "unscaled box holds other points") << '\n';
  }

  RunOutcome out;
  out.exit_code = overall_max <= 1 ? kExitOk : kExitBelowThreshold;
  Json& s = out.summary;
  s["command"] = "lemma2";
  s["config"] = detail::config_json(cfg);
  s["per_T"] = per_t;
  s["max_count"] = overall_max;
  s["origin_only"] = all_origin_only;
  s["verdict"] = overall_max <= 1 ? "pass" : "fail";
  s["seconds"] = clock.seconds();
  write_json(dir / "summary.json", s);
  return out;
}

}  // namespace dioph::harness
