#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "mablab/config.hpp"
#include "mablab/errors.hpp"
#include "mablab/scenario.hpp"

namespace mablab {
namespace {

const char* kMinimal = R"({
  "name": "demo",
  "arms": [{"family": "gaussian", "mean": 1.0}, {"family": "bernoulli", "p": 0.3}],
  "sampling": {"rule": "ucb", "delta": 0.05},
  "stopping": {"rule": "fixed-horizon", "horizon": 50},
  "choosing": {"rule": "fixed-arm", "arm": 2}
})";

std::string path_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  if (at == std::string::npos) throw std::logic_error("pattern not found: " + from);
  return text.replace(at, from.size(), to);
}

TEST(Config, ParsesMinimalWithDefaults) {
  const ScenarioConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.name, "demo");
  ASSERT_EQ(c.arms.size(), 2u);
  EXPECT_EQ(c.arms[0], ArmSpec::gaussian(1.0, 1.0));
  EXPECT_EQ(c.arms[1], ArmSpec::bernoulli(0.3));
  EXPECT_EQ(std::get<sampling::Ucb>(c.strategy.sampling.rule).delta, 0.05);
  EXPECT_TRUE(c.strategy.sampling.warmup);
  EXPECT_EQ(std::get<stopping::FixedHorizon>(c.strategy.stopping.rule).horizon, 50u);
  EXPECT_EQ(std::get<choosing::FixedArm>(c.strategy.choosing.rule).arm, 1u);
  EXPECT_EQ(c.reps, kDefaultReps);
  EXPECT_EQ(c.master_seed, kDefaultSeed);
  EXPECT_EQ(c.cap, kDefaultCap);
  EXPECT_FALSE(c.output_dir);
}

TEST(Config, RoundTripsEveryBuiltin) {
  for (const auto& c : builtin_scenarios()) {
    const std::string text = config_to_json(c);
    const ScenarioConfig back = parse_config(text);
    EXPECT_TRUE(back == c) << c.name;
    EXPECT_EQ(config_to_json(back), text) << c.name;
  }
}

TEST(Config, RoundTripsOutputDir) {
  ScenarioConfig c = parse_config(kMinimal);
  c.output_dir = "out/dir";
  EXPECT_TRUE(parse_config(config_to_json(c)) == c);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(path_of(replaced(kMinimal, R"("delta": 0.05)", R"("delta": 0.05, "gamma": 1)")),
            "sampling.gamma");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("delta": 0.05)", R"("delta": 1.5)")), "sampling.delta");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("delta": 0.05)", R"("delta": "x")")), "sampling.delta");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("arm": 2)", R"("arm": 0)")), "choosing.arm");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("arm": 2)", R"("arm": 3)")), "choosing.arm");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("p": 0.3)", R"("p": 1.3)")), "arms[1]");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("p": 0.3)", R"("q": 0.3)")), "arms[1].p");
  EXPECT_EQ(path_of(replaced(kMinimal, "gaussian", "cauchy")), "arms[0].family");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("rule": "ucb")", R"("rule": "softmax")")),
            "sampling.rule");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("name": "demo")", R"("name": "a,b")")), "name");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("name": "demo",)", R"("name": "demo", "reps": 0,)")),
            "reps");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("name": "demo",)", R"("name": "demo", "extra": 1,)")),
            "extra");
  EXPECT_EQ(path_of(replaced(kMinimal, R"("horizon": 50)", R"("horizon": -5)")),
            "stopping.horizon");
}

TEST(Config, MissingFieldsReported) {
  EXPECT_EQ(path_of(replaced(kMinimal, R"(, "horizon": 50)", "")), "stopping.horizon");
  EXPECT_EQ(path_of(R"({"name": "x"})"), "arms");
}

TEST(Config, MalformedJson) {
  EXPECT_EQ(path_of("{ not json"), "");
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
}

TEST(Config, MissingFileIsIoError) {
  EXPECT_THROW(load_config("/nonexistent/config.json"), IoError);
}

TEST(Config, EveryRuleParses) {
  const char* sampling[] = {
      R"({"rule": "round-robin"})",
      R"({"rule": "uniform-random", "warmup": false})",
      R"({"rule": "greedy"})",
      R"({"rule": "eps-greedy", "epsilon": 0.1})",
      R"({"rule": "lil-ucb", "delta": 0.01})",
      R"({"rule": "thompson-gaussian", "prior_means": [0, 1], "prior_sd": 2})",
      R"({"rule": "thompson-beta", "prior_successes": 2, "prior_failures": 3})",
      R"({"rule": "argmin-mean"})",
  };
  for (const char* s : sampling) {
    const std::string text = replaced(kMinimal, R"({"rule": "ucb", "delta": 0.05})", s);
    EXPECT_NO_THROW(parse_config(text)) << s;
  }
  const char* stopping[] = {
      R"({"rule": "first-success", "arm": 2})",
      R"({"rule": "mean-boundary", "arm": 1, "offset": 0.5, "scale": 1})",
      R"({"rule": "mean-boundary", "arm": 1, "values": [3, 2, 1]})",
      R"({"rule": "line-crossing", "arm": 1, "slope": 0, "intercept": 5})",
      R"({"rule": "slrt", "w": 5, "alpha": 0.05, "max_time": 100})",
      R"({"rule": "lil-ucb-count", "lambda": 4})",
      R"({"rule": "gap-stop", "gap": 0.5, "max_cycles": 10})",
  };
  for (const char* s : stopping) {
    const std::string text = replaced(kMinimal, R"({"rule": "fixed-horizon", "horizon": 50})", s);
    const ScenarioConfig c = parse_config(text);
    EXPECT_TRUE(parse_config(config_to_json(c)) == c) << s;
  }
  const char* choosing[] = {
      R"({"rule": "argmax-mean"})",
      R"({"rule": "rank-probability", "weights": [0.7, 0.3]})",
      R"({"rule": "argmax-count"})",
      R"({"rule": "argmax-last-observation"})",
  };
  for (const char* s : choosing) {
    const std::string text = replaced(kMinimal, R"({"rule": "fixed-arm", "arm": 2})", s);
    EXPECT_NO_THROW(parse_config(text)) << s;
  }
}

}  // namespace
}  // namespace mablab
