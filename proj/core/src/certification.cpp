#include "mablab/certification.hpp"

#include <ostream>

#include "mablab/errors.hpp"
#include "mablab/parallel.hpp"
#include "mablab/philox.hpp"
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

RuleSet sampling_set(std::string name, std::string description, SamplingRuleSpec sampling,
                     std::vector<ArmSpec> arms, std::size_t horizon) {
  return {std::move(name), std::move(description),
          StrategySpec{std::move(sampling), {stopping::FixedHorizon{horizon}},
                       {choosing::FixedArm{0}}},
          std::move(arms), horizon, Clause::kSamplingCount};
}

RuleSet stopping_set(std::string name, std::string description, StoppingRuleSpec stopping,
                     std::vector<ArmSpec> arms) {
  return {std::move(name), std::move(description),
          StrategySpec{{sampling::RoundRobin{}}, std::move(stopping), {choosing::FixedArm{0}}},
          std::move(arms), 1'000'000, Clause::kStoppingTime};
}

RuleSet choosing_set(std::string name, std::string description, ChoosingRuleSpec choosing,
                     std::size_t horizon) {
  return {std::move(name), std::move(description),
          StrategySpec{{sampling::RoundRobin{}}, {stopping::FixedHorizon{horizon}},
                       std::move(choosing)},
          gaussians({0, 0, 0}), horizon, Clause::kChoosingIndicator};
}

}  // namespace

std::vector<RuleSet> certification_rule_sets() {
  const auto three = gaussians({1, 2, 3});
  std::vector<RuleSet> sets;
  sets.push_back(sampling_set("greedy", "greedy sampling, fixed horizon", {sampling::Greedy{}},
                              three, 60));
  sets.push_back(sampling_set("eps-greedy", "epsilon-greedy (0.2), fixed horizon",
                              {sampling::EpsGreedy{0.2}}, three, 60));
  sets.push_back(sampling_set("ucb", "UCB (delta 0.1), fixed horizon", {sampling::Ucb{0.1}},
                              three, 60));
  sets.push_back(sampling_set("thompson-gaussian", "Gaussian Thompson sampling, fixed horizon",
                              {sampling::ThompsonGaussian{{}, 1.0, 1.0}}, three, 60));
  sets.push_back(sampling_set(
      "thompson-beta", "Beta-Bernoulli Thompson sampling, fixed horizon",
      {sampling::ThompsonBetaBernoulli{1, 1}},
      {ArmSpec::bernoulli(0.3), ArmSpec::bernoulli(0.5), ArmSpec::bernoulli(0.7)}, 40));
  sets.push_back(sampling_set("lil-ucb-sampling", "lil'UCB sampling, fixed horizon",
                              {sampling::LilUcb{}}, three, 60));

  sets.push_back(stopping_set("mean-boundary", "stop once the arm-1 mean exceeds 1/sqrt(t)",
                              {stopping::MeanBoundary{0, 0.0, 1.0, {}}}, gaussians({0.3, 0.0})));
  sets.push_back(stopping_set("line-crossing", "stop once S_1 >= 0.5 N_1 + 3",
                              {stopping::LineCrossing{0, 0.5, 3.0}}, gaussians({1.0, 0.0})));
  sets.push_back(stopping_set("first-success", "stop at the first 1 from arm 1",
                              {stopping::FirstSuccess{0, 1.0}},
                              {ArmSpec::bernoulli(0.4), ArmSpec::bernoulli(0.6)}));

  sets.push_back(choosing_set("argmax-mean", "largest sample mean after 9 cyclic pulls",
                              {choosing::ArgmaxMean{}}, 9));
  sets.push_back(choosing_set("rank-probability", "rank weights (0.6, 0.3, 0.1)",
                              {choosing::RankProbability{{0.6, 0.3, 0.1}}}, 9));
  sets.push_back(choosing_set("argmax-last-observation", "largest single observation",
                              {choosing::ArgmaxLastObservation{}}, 3));

  RuleSet lil{"lil-ucb",
              "full lil'UCB strategy on gap-1 Gaussian arms",
              StrategySpec{{sampling::LilUcb{}}, {stopping::LilUcbCount{9.0}},
                           {choosing::ArgmaxCount{}}},
              gaussians({1, 0, -1}),
              1'000'000,
              Clause::kStrategyRatio,
              true,
              false};
  sets.push_back(lil);

  RuleSet pessimistic = sampling_set("pessimistic", "pulls the smallest sample mean",
                                     {sampling::ArgminMean{}}, three, 60);
  pessimistic.expect_rejection = true;
  sets.push_back(pessimistic);
  return sets;
}

RuleSet find_rule_set(const std::string& name) {
  for (RuleSet& s : certification_rule_sets()) {
    if (s.name == name) {
      return std::move(s);
    }
  }
  throw ConfigError("rule-set", "unknown rule set '" + name + "'");
}

bool SweepOutcome::inconclusive() const {
  return verdict.direction == Direction::kInconclusive || (probe && probe->inconclusive);
}

bool SweepOutcome::passed() const {
  return !inconclusive() && verdict.passes() && (!probe || probe->all_hold());
}

std::size_t CertificationReport::passed() const {
  std::size_t n = 0;
  for (const auto& s : sweeps) n += s.passed() ? 1 : 0;
  return n;
}

std::size_t CertificationReport::failed() const {
  std::size_t n = 0;
  for (const auto& s : sweeps) n += (!s.inconclusive() && !s.passed()) ? 1 : 0;
  return n;
}

std::size_t CertificationReport::inconclusive() const {
  std::size_t n = 0;
  for (const auto& s : sweeps) n += s.inconclusive() ? 1 : 0;
  return n;
}

const SweepOutcome* CertificationReport::rejection() const {
  for (const auto& s : sweeps) {
    if (!s.inconclusive() && !s.verdict.passes() && s.verdict.witness) {
      return &s;
    }
  }
  return nullptr;
}

bool CertificationReport::meets_expectation() const {
  if (expect_rejection) {
    return rejection() != nullptr;
  }
  return !sweeps.empty() && passed() == sweeps.size();
}

CertificationReport certify(const RuleSet& rule_set, std::size_t sweeps,
                            std::uint64_t master_seed, unsigned threads) {
  validate(rule_set.strategy, rule_set.arms.size());
  CertificationReport report{rule_set.name, rule_set.clause, rule_set.expect_rejection,
                             std::vector<SweepOutcome>(sweeps)};
  parallel_for(sweeps, threads, [&](std::size_t r) {
    const std::uint64_t sweep_seed = derive_seed(master_seed, r, 1);
    const PerturbationSweep sweep =
        random_sweep(rule_set.strategy, rule_set.arms, rule_set.cap, sweep_seed);
    const auto points = replay_with_perturbation(sweep);
    SweepOutcome outcome{r,          sweep.seed, sweep.row,
                         sweep.arm,  sweep.grid, monotonicity_verdict(points, sweep.arm, rule_set.clause),
                         std::nullopt};
    if (rule_set.lemma_probe) {
      outcome.probe = lil_ucb_lemma_probe(points, sweep.arm);
    }
    report.sweeps[r] = std::move(outcome);
  });
  return report;
}

void write_verdict_csv(std::ostream& out, const CertificationReport& report) {
  out << "rule_set,sweep,seed,row,arm,grid_size,clause,direction,passed,witness_lower_value,"
         "witness_upper_value,witness_lower_quantity,witness_upper_quantity,witness_time,"
         "probe_stop_not_later,probe_choice_preserved,probe_count_not_larger\n";
  for (const SweepOutcome& s : report.sweeps) {
    out << report.rule_set << ',' << s.index << ',' << s.seed << ',' << s.row << ','
        << (s.arm + 1) << ',' << s.grid.size() << ',' << to_string(s.verdict.clause) << ','
        << to_string(s.verdict.direction) << ',' << (s.passed() ? 1 : 0) << ',';
    if (const auto& w = s.verdict.witness) {
      out << format_double(w->lower_value) << ',' << format_double(w->upper_value) << ','
          << format_double(w->lower_quantity) << ',' << format_double(w->upper_quantity) << ',';
      if (w->time) out << *w->time;
    } else {
      out << ",,,,";
    }
    out << ',';
    if (s.probe) {
      out << s.probe->stop_not_later << ',' << s.probe->choice_preserved << ','
          << s.probe->count_not_larger;
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

}  // namespace mablab
