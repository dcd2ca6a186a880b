#include "mablab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mablab/detail/overloaded.hpp"
#include "mablab/errors.hpp"

namespace mablab {
namespace {

using detail::Overloaded;
using nlohmann::json;

// Reads fields of one JSON object and remembers which keys were used, so
// that leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) {
      throw ConfigError(path_, "expected an object");
    }
  }

  std::string field_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    if (!object_.contains(key)) {
      throw ConfigError(field_path(key), "missing required field");
    }
    return object_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) {
      throw ConfigError(field_path(key), "expected a number");
    }
    return v.get<double>();
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : (used_.insert(key), fallback);
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_unsigned()) {
      throw ConfigError(field_path(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    return has(key) ? unsigned_integer(key) : (used_.insert(key), fallback);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) {
      used_.insert(key);
      return fallback;
    }
    const json& v = raw(key);
    if (!v.is_boolean()) {
      throw ConfigError(field_path(key), "expected true or false");
    }
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) {
      throw ConfigError(field_path(key), "expected a string");
    }
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) {
      used_.insert(key);
      return {};
    }
    const json& v = raw(key);
    if (!v.is_array()) {
      throw ConfigError(field_path(key), "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw ConfigError(field_path(key) + "[" + std::to_string(i) + "]", "expected a number");
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  // 1-based in the file, 0-based in memory.
  std::size_t arm_index(const std::string& key) {
    const std::uint64_t k = unsigned_integer(key);
    if (k == 0) {
      throw ConfigError(field_path(key), "arm indices start at 1");
    }
    return static_cast<std::size_t>(k - 1);
  }

  void finish() const {
    for (const auto& item : object_.items()) {
      if (!used_.contains(item.key())) {
        throw ConfigError(field_path(item.key()), "unknown key");
      }
    }
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> used_;
};

ArmSpec parse_arm(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string family = r.string("family");
  try {
    ArmSpec arm = [&] {
      if (family == "gaussian") {
        const double mean = r.number("mean");
        return ArmSpec::gaussian(mean, r.number("sd", 1.0));
      }
      if (family == "bernoulli") {
        return ArmSpec::bernoulli(r.number("p"));
      }
      if (family == "uniform") {
        const double lo = r.number("lo");
        return ArmSpec::uniform(lo, r.number("hi"));
      }
      throw ConfigError(r.field_path("family"), "unknown family '" + family + "'");
    }();
    r.finish();
    return arm;
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

SamplingRuleSpec parse_sampling(const json& j) {
  ObjectReader r(j, "sampling");
  const std::string name = r.string("rule");
  SamplingRuleSpec spec{sampling::RoundRobin{}, r.boolean("warmup", true)};
  if (name == "round-robin") {
    spec.rule = sampling::RoundRobin{};
  } else if (name == "uniform-random") {
    spec.rule = sampling::UniformRandom{};
  } else if (name == "greedy") {
    spec.rule = sampling::Greedy{};
  } else if (name == "eps-greedy") {
    spec.rule = sampling::EpsGreedy{r.number("epsilon")};
  } else if (name == "ucb") {
    spec.rule = sampling::Ucb{r.number("delta", 0.1)};
  } else if (name == "lil-ucb") {
    sampling::LilUcb p;
    p.epsilon = r.number("epsilon", p.epsilon);
    p.beta = r.number("beta", p.beta);
    p.delta = r.number("delta", p.delta);
    p.sigma = r.number("sigma", p.sigma);
    spec.rule = p;
  } else if (name == "thompson-gaussian") {
    sampling::ThompsonGaussian p;
    p.prior_means = r.numbers("prior_means");
    p.prior_sd = r.number("prior_sd", p.prior_sd);
    p.noise_sd = r.number("noise_sd", p.noise_sd);
    spec.rule = p;
  } else if (name == "thompson-beta") {
    const auto a = r.unsigned_integer("prior_successes", 1);
    const auto b = r.unsigned_integer("prior_failures", 1);
    if (a > 1'000'000 || b > 1'000'000) {
      throw ConfigError("sampling", "prior parameters must be at most 1e6");
    }
    spec.rule = sampling::ThompsonBetaBernoulli{static_cast<unsigned>(a), static_cast<unsigned>(b)};
  } else if (name == "argmin-mean") {
    spec.rule = sampling::ArgminMean{};
  } else {
    throw ConfigError("sampling.rule", "unknown rule '" + name + "'");
  }
  r.finish();
  return spec;
}

StoppingRuleSpec parse_stopping(const json& j) {
  ObjectReader r(j, "stopping");
  const std::string name = r.string("rule");
  StoppingRuleSpec spec{stopping::FixedHorizon{}};
  if (name == "fixed-horizon") {
    spec.rule = stopping::FixedHorizon{r.unsigned_integer("horizon")};
  } else if (name == "first-success") {
    const std::size_t arm = r.arm_index("arm");
    spec.rule = stopping::FirstSuccess{arm, r.number("target", 1.0)};
  } else if (name == "mean-boundary") {
    stopping::MeanBoundary p;
    p.arm = r.arm_index("arm");
    p.offset = r.number("offset", 0.0);
    p.scale = r.number("scale", 0.0);
    p.values = r.numbers("values");
    spec.rule = p;
  } else if (name == "line-crossing") {
    stopping::LineCrossing p;
    p.arm = r.arm_index("arm");
    p.slope = r.number("slope");
    p.intercept = r.number("intercept");
    spec.rule = p;
  } else if (name == "slrt") {
    stopping::Slrt p;
    p.w = r.number("w", p.w);
    p.alpha = r.number("alpha", p.alpha);
    p.sigma = r.number("sigma", p.sigma);
    p.max_time = r.unsigned_integer("max_time", p.max_time);
    spec.rule = p;
  } else if (name == "lil-ucb-count") {
    spec.rule = stopping::LilUcbCount{r.number("lambda", 9.0)};
  } else if (name == "gap-stop") {
    stopping::GapStop p;
    p.gap = r.number("gap");
    p.max_cycles = r.unsigned_integer("max_cycles", p.max_cycles);
    spec.rule = p;
  } else {
    throw ConfigError("stopping.rule", "unknown rule '" + name + "'");
  }
  r.finish();
  return spec;
}

ChoosingRuleSpec parse_choosing(const json& j) {
  ObjectReader r(j, "choosing");
  const std::string name = r.string("rule");
  ChoosingRuleSpec spec{choosing::ArgmaxMean{}};
  if (name == "fixed-arm") {
    spec.rule = choosing::FixedArm{r.arm_index("arm")};
  } else if (name == "argmax-mean") {
    spec.rule = choosing::ArgmaxMean{};
  } else if (name == "rank-probability") {
    spec.rule = choosing::RankProbability{r.numbers("weights")};
  } else if (name == "argmax-count") {
    spec.rule = choosing::ArgmaxCount{};
  } else if (name == "argmax-last-observation") {
    spec.rule = choosing::ArgmaxLastObservation{};
  } else {
    throw ConfigError("choosing.rule", "unknown rule '" + name + "'");
  }
  r.finish();
  return spec;
}

json arm_to_json(const ArmSpec& arm) {
  return std::visit(Overloaded{
                        [](const Gaussian& g) {
                          return json{{"family", "gaussian"}, {"mean", g.mean}, {"sd", g.sd}};
                        },
                        [](const Bernoulli& b) { return json{{"family", "bernoulli"}, {"p", b.p}}; },
                        [](const BoundedUniform& u) {
                          return json{{"family", "uniform"}, {"lo", u.lo}, {"hi", u.hi}};
                        },
                    },
                    arm.family());
}

json sampling_to_json(const SamplingRuleSpec& spec) {
  json j{{"rule", rule_name(spec)}, {"warmup", spec.warmup}};
  std::visit(Overloaded{
                 [](const auto&) {},
                 [&](const sampling::EpsGreedy& p) { j["epsilon"] = p.epsilon; },
                 [&](const sampling::Ucb& p) { j["delta"] = p.delta; },
                 [&](const sampling::LilUcb& p) {
                   j["epsilon"] = p.epsilon;
                   j["beta"] = p.beta;
                   j["delta"] = p.delta;
                   j["sigma"] = p.sigma;
                 },
                 [&](const sampling::ThompsonGaussian& p) {
                   j["prior_means"] = p.prior_means;
                   j["prior_sd"] = p.prior_sd;
                   j["noise_sd"] = p.noise_sd;
                 },
                 [&](const sampling::ThompsonBetaBernoulli& p) {
                   j["prior_successes"] = p.prior_successes;
                   j["prior_failures"] = p.prior_failures;
                 },
             },
             spec.rule);
  return j;
}

json stopping_to_json(const StoppingRuleSpec& spec) {
  json j{{"rule", rule_name(spec)}};
  std::visit(Overloaded{
                 [&](const stopping::FixedHorizon& p) { j["horizon"] = p.horizon; },
                 [&](const stopping::FirstSuccess& p) {
                   j["arm"] = p.arm + 1;
                   j["target"] = p.target;
                 },
                 [&](const stopping::MeanBoundary& p) {
                   j["arm"] = p.arm + 1;
                   j["offset"] = p.offset;
                   j["scale"] = p.scale;
                   j["values"] = p.values;
                 },
                 [&](const stopping::LineCrossing& p) {
                   j["arm"] = p.arm + 1;
                   j["slope"] = p.slope;
                   j["intercept"] = p.intercept;
                 },
                 [&](const stopping::Slrt& p) {
                   j["w"] = p.w;
                   j["alpha"] = p.alpha;
                   j["sigma"] = p.sigma;
                   j["max_time"] = p.max_time;
                 },
                 [&](const stopping::LilUcbCount& p) { j["lambda"] = p.lambda; },
                 [&](const stopping::GapStop& p) {
                   j["gap"] = p.gap;
                   j["max_cycles"] = p.max_cycles;
                 },
             },
             spec.rule);
  return j;
}

json choosing_to_json(const ChoosingRuleSpec& spec) {
  json j{{"rule", rule_name(spec)}};
  std::visit(Overloaded{
                 [](const auto&) {},
                 [&](const choosing::FixedArm& p) { j["arm"] = p.arm + 1; },
                 [&](const choosing::RankProbability& p) { j["weights"] = p.weights; },
             },
             spec.rule);
  return j;
}

}  // namespace

void validate(const ScenarioConfig& config) {
  if (config.name.empty()) {
    throw ConfigError("name", "must not be empty");
  }
  if (config.name.find_first_of(",\"\n\r/\\") != std::string::npos) {
    throw ConfigError("name", "must not contain commas, quotes, slashes or line breaks");
  }
  if (config.reps < 1) {
    throw ConfigError("reps", "must be >= 1");
  }
  if (config.cap < 1) {
    throw ConfigError("cap", "must be >= 1");
  }
  validate(config.strategy, config.arms.size());
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  ObjectReader r(root, "");
  ScenarioConfig config;
  config.name = r.string("name");

  const json& arms = r.raw("arms");
  if (!arms.is_array()) {
    throw ConfigError("arms", "expected an array");
  }
  for (std::size_t i = 0; i < arms.size(); ++i) {
    config.arms.push_back(parse_arm(arms[i], "arms[" + std::to_string(i) + "]"));
  }
  config.strategy.sampling = parse_sampling(r.raw("sampling"));
  config.strategy.stopping = parse_stopping(r.raw("stopping"));
  config.strategy.choosing = parse_choosing(r.raw("choosing"));
  config.reps = r.unsigned_integer("reps", kDefaultReps);
  config.master_seed = r.unsigned_integer("master_seed", kDefaultSeed);
  config.cap = r.unsigned_integer("cap", kDefaultCap);
  if (r.has("output_dir")) {
    config.output_dir = r.string("output_dir");
  }
  r.finish();
  validate(config);
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ScenarioConfig& config) {
  json arms = json::array();
  for (const ArmSpec& arm : config.arms) {
    arms.push_back(arm_to_json(arm));
  }
  json j{{"name", config.name},
         {"arms", arms},
         {"sampling", sampling_to_json(config.strategy.sampling)},
         {"stopping", stopping_to_json(config.strategy.stopping)},
         {"choosing", choosing_to_json(config.strategy.choosing)},
         {"reps", config.reps},
         {"master_seed", config.master_seed},
         {"cap", config.cap}};
  if (config.output_dir) {
    j["output_dir"] = config.output_dir->string();
  }
  return j.dump(2);
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return config_to_json(a) == config_to_json(b);
}

}  // namespace mablab
