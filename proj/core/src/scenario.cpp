#include "mablab/scenario.hpp"

#include <fstream>
#include <sstream>

#include "mablab/errors.hpp"
#include "mablab/report.hpp"

namespace mablab {
namespace {

std::vector<ArmSpec> gaussians(std::initializer_list<double> means) {
  std::vector<ArmSpec> arms;
  for (double m : means) {
    arms.push_back(ArmSpec::gaussian(m, 1.0));
  }
  return arms;
}

ScenarioConfig make(std::string name, std::vector<ArmSpec> arms, SamplingRuleSpec sampling,
                    StoppingRuleSpec stopping, ChoosingRuleSpec choosing,
                    std::size_t cap = kDefaultCap) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.arms = std::move(arms);
  c.strategy = {std::move(sampling), std::move(stopping), std::move(choosing)};
  c.cap = cap;
  return c;
}

std::string gap_label(int g) { return std::to_string(g); }

}  // namespace

std::vector<ScenarioConfig> builtin_scenarios() {
  std::vector<ScenarioConfig> out;
  const auto fixed_t = StoppingRuleSpec{stopping::FixedHorizon{200}};
  const auto first_arm = ChoosingRuleSpec{choosing::FixedArm{0}};

  out.push_back(make("greedy-fixed-T", gaussians({1, 2, 3}), {sampling::Greedy{}}, fixed_t,
                     first_arm));
  out.push_back(make("ucb-fixed-T", gaussians({1, 2, 3}), {sampling::Ucb{0.1}}, fixed_t,
                     first_arm));
  out.push_back(make("thompson-fixed-T", gaussians({1, 2, 3}),
                     {sampling::ThompsonGaussian{{}, 1.0, 1.0}}, fixed_t, first_arm));

  const auto slrt = StoppingRuleSpec{stopping::Slrt{10.0, 0.1, 1.0, 200}};
  out.push_back(make("slrt-null", gaussians({0, 0}), {sampling::RoundRobin{}}, slrt, first_arm));
  out.push_back(make("slrt-alt", gaussians({1, 0}), {sampling::RoundRobin{}}, slrt, first_arm));

  for (int g : {1, 3, 5}) {
    out.push_back(make("lilucb-gap-" + gap_label(g), gaussians({double(g), 0.0, double(-g)}),
                       {sampling::LilUcb{}}, {stopping::LilUcbCount{9.0}},
                       {choosing::ArgmaxCount{}}));
  }
  for (int g : {1, 3, 5}) {
    out.push_back(make("gapstop-gap-" + gap_label(g), gaussians({double(g), 0.0, double(-g)}),
                       {sampling::RoundRobin{}}, {stopping::GapStop{0.7 * g, 1000}},
                       {choosing::ArgmaxMean{}}));
  }

  for (const auto& [label, mu] : {std::pair{"0.2", 0.2}, {"0.5", 0.5}, {"0.8", 0.8}}) {
    out.push_back(make(std::string("first-success-mu-") + label,
                       {ArmSpec::bernoulli(mu), ArmSpec::bernoulli(0.5)}, {sampling::RoundRobin{}},
                       {stopping::FirstSuccess{0, 1.0}}, first_arm));
  }
  for (int b : {5, 10}) {
    out.push_back(make("line-walk-b-" + std::to_string(b), gaussians({1}),
                       {sampling::RoundRobin{}}, {stopping::LineCrossing{0, 1.0, double(b)}},
                       first_arm, 100'000));
  }
  for (std::size_t k : {2u, 10u}) {
    std::vector<ArmSpec> arms(k, ArmSpec::gaussian(0.0, 1.0));
    out.push_back(make("max-draw-K-" + std::to_string(k), arms, {sampling::RoundRobin{}},
                       {stopping::FixedHorizon{k}}, {choosing::ArgmaxLastObservation{}}));
  }
  return out;
}

ScenarioConfig find_builtin(const std::string& name) {
  for (ScenarioConfig& c : builtin_scenarios()) {
    if (c.name == name) {
      return std::move(c);
    }
  }
  throw ConfigError("name", "no builtin scenario named '" + name + "'");
}

ScenarioResult simulate_scenario(const ScenarioConfig& config, unsigned threads) {
  validate(config);
  ScenarioResult result;
  result.records = simulate_reps(config.strategy, config.arms, config.reps, config.master_seed,
                                 config.cap, threads);
  for (const ArmSpec& arm : config.arms) {
    result.mus.push_back(arm.mean());
  }
  result.report = bias_report(result.records, result.mus);
  result.summary = summary_json(config.name, result.report, result.records);
  return result;
}

std::string raw_csv_text(const ScenarioConfig& config, const ScenarioResult& result) {
  std::ostringstream out;
  write_raw_csv(out, config.name, result.records, result.mus);
  return out.str();
}

ScenarioFiles write_scenario(const ScenarioConfig& config, const ScenarioResult& result,
                             const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory " + out_dir.string());
  }
  ScenarioFiles files{out_dir / (config.name + ".raw.csv"),
                      out_dir / (config.name + ".summary.json")};
  {
    std::ofstream raw(files.raw_csv, std::ios::binary);
    if (!raw) {
      throw IoError("cannot write " + files.raw_csv.string());
    }
    write_raw_csv(raw, config.name, result.records, result.mus);
    if (!raw.flush()) {
      throw IoError("failed writing " + files.raw_csv.string());
    }
  }
  std::ofstream summary(files.summary_json, std::ios::binary);
  if (!summary || !(summary << result.summary) || !summary.flush()) {
    throw IoError("cannot write " + files.summary_json.string());
  }
  return files;
}

ScenarioFiles run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                           unsigned threads) {
  return write_scenario(config, simulate_scenario(config, threads), out_dir);
}

}  // namespace mablab
