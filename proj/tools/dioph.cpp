// Command-line front end for the experiment harness.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dioph/harness/runs.hpp"

namespace {

using namespace dioph;
using namespace dioph::harness;

struct Overrides {
  std::string config_file;
  std::vector<std::string> settings;
  std::string seed, t_max, samples, out_dir, parallelism, convention;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_file, "key = value configuration file");
  cmd->add_option("--set", o.settings, "extra key=value setting (repeatable)");
  cmd->add_option("--seed", o.seed);
  cmd->add_option("--t-max", o.t_max);
  cmd->add_option("--samples", o.samples);
  cmd->add_option("--out-dir", o.out_dir);
  cmd->add_option("--parallelism", o.parallelism, "worker threads or auto");
  cmd->add_option("--convention", o.convention, "strict or inclusive");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg;
  if (!o.config_file.empty()) load_config_file(cfg, o.config_file);
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  const std::pair<const char*, const std::string*> flags[] = {
      {"seed", &o.seed},           {"t_max", &o.t_max},
      {"samples", &o.samples},     {"out_dir", &o.out_dir},
      {"parallelism", &o.parallelism}, {"convention", &o.convention}};
  for (const auto& [key, value] : flags) {
    if (!value->empty()) apply_setting(cfg, key, *value);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diophantine approximation lab for linear subspaces"};
  app.require_subcommand(1);
  Overrides o;
  using Runner = RunOutcome (*)(const ExperimentConfig&, std::ostream&);
  const std::pair<const char*, Runner> commands[] = {
      {"records", run_records},     {"exponent", run_exponent}, {"verify-theorem", run_verify_theorem},
      {"series", run_series},       {"lemma2", run_lemma2}};
  const char* help[] = {"record table of a subject", "exponent estimates of a subject",
                        "sample graphs inside A and check the exponent bound", "dyadic cover series and classifier",
                        "lattice points in shifted half-scale boxes"};
  Runner chosen = nullptr;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* cmd = app.add_subcommand(commands[i].first, help[i]);
    add_common(cmd, o);
    cmd->callback([&chosen, run = commands[i].second] { chosen = run; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    const ExperimentConfig cfg = resolve(o);
    return chosen(cfg, std::cout).exit_code;
  } catch (const PsiNotValid& e) {
    std::cerr << "hypothesis violated: " << e.what() << '\n';
    return kExitHypothesisViolated;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudgetExceeded;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
