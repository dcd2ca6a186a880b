#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

#include "mablab/certification.hpp"
#include "mablab/errors.hpp"

namespace mablab {
namespace {

TEST(RuleSets, NamesUniqueAndLookup) {
  std::set<std::string> names;
  for (const auto& s : certification_rule_sets()) {
    EXPECT_TRUE(names.insert(s.name).second) << s.name;
    EXPECT_NO_THROW(validate(s.strategy, s.arms.size())) << s.name;
  }
  EXPECT_TRUE(names.contains("pessimistic"));
  EXPECT_TRUE(names.contains("lil-ucb"));
  EXPECT_THROW(find_rule_set("nope"), ConfigError);
}

TEST(Certify, OptimisticSetsPass) {
  for (const auto& s : certification_rule_sets()) {
    if (s.expect_rejection) continue;
    const auto report = certify(s, 25, 7);
    EXPECT_EQ(report.sweeps.size(), 25u);
    EXPECT_EQ(report.failed(), 0u) << s.name;
    EXPECT_EQ(report.inconclusive(), 0u) << s.name;
    EXPECT_TRUE(report.meets_expectation()) << s.name;
    EXPECT_EQ(report.rejection(), nullptr) << s.name;
  }
}

TEST(Certify, PessimisticRejectedWithWitness) {
  const auto report = certify(find_rule_set("pessimistic"), 200, 20190601);
  EXPECT_GT(report.failed(), 0u);
  EXPECT_TRUE(report.meets_expectation());
  const SweepOutcome* r = report.rejection();
  ASSERT_NE(r, nullptr);
  ASSERT_TRUE(r->verdict.witness);
  EXPECT_LT(r->verdict.witness->lower_value, r->verdict.witness->upper_value);
  EXPECT_GT(r->verdict.witness->lower_quantity, r->verdict.witness->upper_quantity);
}

TEST(Certify, LilUcbRunsLemmaProbe) {
  const auto report = certify(find_rule_set("lil-ucb"), 10, 3);
  for (const auto& s : report.sweeps) {
    ASSERT_TRUE(s.probe);
    EXPECT_TRUE(s.probe->all_hold());
  }
}

TEST(Certify, IndependentOfThreadCount) {
  const auto set = find_rule_set("thompson-gaussian");
  std::ostringstream one, many;
  write_verdict_csv(one, certify(set, 40, 11, 1));
  write_verdict_csv(many, certify(set, 40, 11, 3));
  EXPECT_EQ(one.str(), many.str());
}

TEST(Certify, VerdictCsvHeader) {
  std::ostringstream out;
  write_verdict_csv(out, certify(find_rule_set("greedy"), 2, 1));
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "rule_set,sweep,seed,row,arm,grid_size,clause,direction,passed,witness_lower_value,"
            "witness_upper_value,witness_lower_quantity,witness_upper_quantity,witness_time,"
            "probe_stop_not_later,probe_choice_preserved,probe_count_not_larger");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

}  // namespace
}  // namespace mablab
