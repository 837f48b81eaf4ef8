#pragma once

// Experiment configuration: flat `key = value` files with `#` comments,
// overridable key by key from the command line.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dioph/approx.hpp"
#include "dioph/constructions.hpp"
#include "dioph/decay.hpp"
#include "dioph/errors.hpp"
#include "dioph/exponent.hpp"

namespace dioph::harness {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ExperimentConfig {
  // Scenario.
  int d = 4;
  int a = 3;
  int b = 1;
  int c = 2;
  SubjectKind kind = SubjectKind::kAlgebraic;
  double theta_bound = 1.0;
  std::uint64_t seed = 1;

  // Enumeration.
  std::int64_t t_max = 10000;
  std::int64_t subject_t_max = 1000000;
  NormConvention convention = NormConvention::kInclusiveUpper;
  std::int64_t node_budget = 100'000'000;
  int parallelism = 1;  // 0 = all hardware threads

  // Verification.
  int samples = 50;
  ExponentMethod method = ExponentMethod::kTailSlope;
  int window = 0;  // 0 = default_window
  double slack = 0.25;
  double threshold = 0.9;

  // records / exponent / lemma2 subject.
  std::string subject = "golden";

  // Series.
  DecayFunction psi{1.0, 1.0 / 3.0, 0.0};
  DecayFunction phi{1.0, 1.8, 0.0};
  std::int64_t series_t_max = 1000000;
  bool profile_all_rows = false;

  // lemma2 command.
  DecayFunction lemma_psi{0.2, 1.0, 0.0};
  std::vector<double> lemma_t{10.0, 100.0, 1000.0};
  int shifts = 1000;
  double scale = 0.5;

  std::string out_dir = ".";

  SearchOptions search() const { return {node_budget, parallelism}; }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (!in || !(in >> std::ws).eof()) throw ConfigError("config: bad value '" + value + "' for " + key);
  return out;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_number<double>(key, trim(item)));
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

}  // namespace detail

inline NormConvention parse_convention(const std::string& v) {
  if (v == "strict") return NormConvention::kStrictUpper;
  if (v == "inclusive") return NormConvention::kInclusiveUpper;
  throw ConfigError("config: convention must be strict or inclusive, got '" + v + "'");
}

inline SubjectKind parse_kind(const std::string& v) {
  if (v == "algebraic") return SubjectKind::kAlgebraic;
  if (v == "golden_embedded") return SubjectKind::kGoldenEmbedded;
  if (v == "rational") return SubjectKind::kRational;
  throw ConfigError("config: unknown subject kind '" + v + "'");
}

/// Applies one setting. Unknown keys are errors.
inline void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  using detail::parse_number;
  const std::string key = detail::trim(raw_key);
  const std::string value = detail::trim(raw_value);
  if (key == "d") cfg.d = parse_number<int>(key, value);
  else if (key == "a") cfg.a = parse_number<int>(key, value);
  else if (key == "b") cfg.b = parse_number<int>(key, value);
  else if (key == "c") cfg.c = parse_number<int>(key, value);
  else if (key == "kind") cfg.kind = parse_kind(value);
  else if (key == "theta_bound") cfg.theta_bound = parse_number<double>(key, value);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "t_max") cfg.t_max = parse_number<std::int64_t>(key, value);
  else if (key == "subject_t_max") cfg.subject_t_max = parse_number<std::int64_t>(key, value);
  else if (key == "convention") cfg.convention = parse_convention(value);
  else if (key == "node_budget") cfg.node_budget = static_cast<std::int64_t>(parse_number<double>(key, value));
  else if (key == "parallelism") cfg.parallelism = value == "auto" || value == "AUTO" ? 0 : parse_number<int>(key, value);
  else if (key == "samples") cfg.samples = parse_number<int>(key, value);
  else if (key == "method") {
    if (value == "tail_slope") cfg.method = ExponentMethod::kTailSlope;
    else if (value == "max_ratio") cfg.method = ExponentMethod::kMaxRatio;
    else throw ConfigError("config: method must be tail_slope or max_ratio");
  } else if (key == "window") cfg.window = parse_number<int>(key, value);
  else if (key == "slack") cfg.slack = parse_number<double>(key, value);
  else if (key == "threshold") cfg.threshold = parse_number<double>(key, value);
  else if (key == "subject") cfg.subject = value;
  else if (key == "psi_rho") cfg.psi.rho = parse_number<double>(key, value);
  else if (key == "psi_gamma") cfg.psi.gamma = parse_number<double>(key, value);
  else if (key == "psi_log") cfg.psi.logpow = parse_number<double>(key, value);
  else if (key == "phi_rho") cfg.phi.rho = parse_number<double>(key, value);
  else if (key == "phi_gamma") cfg.phi.gamma = parse_number<double>(key, value);
  else if (key == "phi_log") cfg.phi.logpow = parse_number<double>(key, value);
  else if (key == "series_t_max") cfg.series_t_max = static_cast<std::int64_t>(parse_number<double>(key, value));
  else if (key == "profile_rows") {
    if (value == "all") cfg.profile_all_rows = true;
    else if (value == "log") cfg.profile_all_rows = false;
    else throw ConfigError("config: profile_rows must be all or log");
  } else if (key == "lemma_psi_rho") cfg.lemma_psi.rho = parse_number<double>(key, value);
  else if (key == "lemma_psi_gamma") cfg.lemma_psi.gamma = parse_number<double>(key, value);
  else if (key == "lemma_t") cfg.lemma_t = detail::parse_list(key, value);
  else if (key == "shifts") cfg.shifts = parse_number<int>(key, value);
  else if (key == "scale") cfg.scale = parse_number<double>(key, value);
  else if (key == "out_dir") cfg.out_dir = value;
  else throw ConfigError("config: unknown key '" + key + "'");
}

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.samples < 1) throw ConfigError("config: samples must be >= 1");
  if (cfg.t_max < 10) throw ConfigError("config: t_max must be >= 10");
  if (cfg.subject_t_max < 10) throw ConfigError("config: subject_t_max must be >= 10");
  if (cfg.slack < 0) throw ConfigError("config: slack must be >= 0");
  if (cfg.node_budget < 1) throw ConfigError("config: node_budget must be positive");
  if (cfg.parallelism < 0) throw ConfigError("config: parallelism must be >= 0 or auto");
  if (!(cfg.theta_bound > 0)) throw ConfigError("config: theta_bound must be positive");
  if (cfg.shifts < 1) throw ConfigError("config: shifts must be >= 1");
  if (!(cfg.scale > 0)) throw ConfigError("config: scale must be positive");
  if (cfg.series_t_max < 1) throw ConfigError("config: series_t_max must be >= 1");
}

inline void load_config_text(ExperimentConfig& cfg, std::istream& in, const std::string& origin) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected key = value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

inline void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  load_config_text(cfg, in, path);
}

}  // namespace dioph::harness
