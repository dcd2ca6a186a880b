// mablab: run bandit bias studies, recompute summaries, certify rules.
//
// Exit codes: 0 success, 1 certification expectation not met, 2 invalid
// input, 3 I/O failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mablab/certification.hpp"
#include "mablab/config.hpp"
#include "mablab/errors.hpp"
#include "mablab/report.hpp"
#include "mablab/scenario.hpp"

namespace {

constexpr int kExitNotCertified = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

void print_report_line(const mablab::ScenarioConfig& config, const mablab::ScenarioFiles& files) {
  std::cout << config.name << ": " << config.reps << " reps -> " << files.raw_csv.string()
            << ", " << files.summary_json.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for the sign of sample-mean bias in bandits"};
  app.require_subcommand(1);

  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;

  auto* run = app.add_subcommand("run", "Run a scenario from a JSON config");
  run->add_option("--config", config_path, "Scenario config file")->required();
  run->add_option("--reps", reps, "Override the number of repetitions");
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");
  run->add_option("--out", out_dir, "Output directory (defaults to the config's output_dir)");

  std::string builtin_name;
  auto* run_builtin = app.add_subcommand("run-builtin", "Run a built-in scenario");
  run_builtin->add_option("name", builtin_name, "Scenario name")->required();
  run_builtin->add_option("--out", out_dir, "Output directory")->required();
  run_builtin->add_option("--reps", reps, "Override the number of repetitions");
  run_builtin->add_option("--seed", seed, "Override the master seed");
  run_builtin->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* list = app.add_subcommand("list-builtins", "List built-in scenarios");
  bool as_json = false;
  list->add_flag("--json", as_json, "Print each config as JSON");

  std::filesystem::path raw_path;
  auto* summarize = app.add_subcommand("summarize", "Recompute a summary from a raw CSV");
  summarize->add_option("raw", raw_path, "Raw CSV file")->required();

  std::string rule_set_name;
  std::size_t sweeps = 200;
  std::uint64_t certify_seed = mablab::kDefaultSeed;
  auto* certify = app.add_subcommand("certify", "Certify a rule by randomized replay sweeps");
  certify->add_option("--rule-set", rule_set_name, "Rule set name, or 'list'")->required();
  certify->add_option("--sweeps", sweeps, "Number of randomized sweeps");
  certify->add_option("--seed", certify_seed, "Master seed for the sweeps");
  certify->add_option("--threads", threads, "Worker threads (0 = all cores)");
  certify->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run || *run_builtin) {
      mablab::ScenarioConfig config =
          *run ? mablab::load_config(config_path) : mablab::find_builtin(builtin_name);
      if (reps) config.reps = *reps;
      if (seed) config.master_seed = *seed;
      if (out_dir.empty()) {
        if (!config.output_dir) {
          throw mablab::ConfigError("output_dir", "no --out given and the config has none");
        }
        out_dir = *config.output_dir;
      }
      mablab::validate(config);
      print_report_line(config, mablab::run_scenario(config, out_dir, threads));
    } else if (*list) {
      for (const auto& config : mablab::builtin_scenarios()) {
        if (as_json) {
          std::cout << mablab::config_to_json(config) << '\n';
        } else {
          std::cout << config.name << '\n';
        }
      }
    } else if (*summarize) {
      std::cout << mablab::summarize(raw_path);
    } else if (*certify) {
      if (rule_set_name == "list") {
        for (const auto& s : mablab::certification_rule_sets()) {
          std::cout << s.name << "  " << s.description << '\n';
        }
        return 0;
      }
      const auto rule_set = mablab::find_rule_set(rule_set_name);
      const auto report = mablab::certify(rule_set, sweeps, certify_seed, threads);
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      const auto path = out_dir / (rule_set.name + ".verdicts.csv");
      std::ofstream csv(path, std::ios::binary);
      if (ec || !csv) {
        throw mablab::IoError("cannot write " + path.string());
      }
      mablab::write_verdict_csv(csv, report);
      if (!csv.flush()) {
        throw mablab::IoError("failed writing " + path.string());
      }
      std::cout << rule_set.name << " [" << mablab::to_string(rule_set.clause) << "]: "
                << report.passed() << " passed, " << report.failed() << " failed, "
                << report.inconclusive() << " inconclusive -> "
                << (rule_set.expect_rejection ? (report.meets_expectation() ? "rejected" : "not rejected")
                                              : (report.meets_expectation() ? "certified" : "not certified"))
                << '\n';
      if (const auto* w = report.rejection(); w && w->verdict.witness) {
        const auto& wit = *w->verdict.witness;
        std::cout << "  witness (sweep " << w->index << "): value " << wit.lower_value << " -> "
                  << wit.lower_quantity << ", value " << wit.upper_value << " -> "
                  << wit.upper_quantity << '\n';
      }
      if (!report.meets_expectation()) {
        return kExitNotCertified;
      }
    }
  } catch (const mablab::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
