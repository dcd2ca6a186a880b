#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "mablab/certification.hpp"
#include "mablab/distributions.hpp"
#include "mablab/engine.hpp"
#include "mablab/estimators.hpp"
#include "mablab/philox.hpp"
#include "mablab/table.hpp"

namespace {

void BM_KeyedUniform(benchmark::State& state) {
  std::uint32_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mablab::keyed_uniform(42, mablab::KeyDomain::kTableCell, i++, 0, 0));
  }
}
BENCHMARK(BM_KeyedUniform);

void BM_GaussianInverseCdf(benchmark::State& state) {
  const auto arm = mablab::ArmSpec::gaussian(0.0);
  double u = 0.001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mablab::inverse_cdf(arm, u));
    u = u > 0.998 ? 0.001 : u + 0.001;
  }
}
BENCHMARK(BM_GaussianInverseCdf);

const std::vector<mablab::ArmSpec> kArms{mablab::ArmSpec::gaussian(1.0),
                                         mablab::ArmSpec::gaussian(2.0),
                                         mablab::ArmSpec::gaussian(3.0)};

void BM_RunUcb(benchmark::State& state) {
  const mablab::StrategySpec s{{mablab::sampling::Ucb{0.1}},
                               {mablab::stopping::FixedHorizon{static_cast<std::size_t>(state.range(0))}},
                               {mablab::choosing::FixedArm{0}}};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const mablab::CounterfactualTable table(seed, kArms);
    benchmark::DoNotOptimize(run_strategy(s, table, mablab::SeedStream(seed), 1'000'000));
    ++seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunUcb)->Arg(200)->Arg(2000);

void BM_RunThompson(benchmark::State& state) {
  const mablab::StrategySpec s{{mablab::sampling::ThompsonGaussian{}},
                               {mablab::stopping::FixedHorizon{200}},
                               {mablab::choosing::FixedArm{0}}};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const mablab::CounterfactualTable table(seed, kArms);
    benchmark::DoNotOptimize(run_strategy(s, table, mablab::SeedStream(seed), 1'000'000));
    ++seed;
  }
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_RunThompson);

void BM_McBiasGreedy(benchmark::State& state) {
  const mablab::StrategySpec s{{mablab::sampling::Greedy{}},
                               {mablab::stopping::FixedHorizon{200}},
                               {mablab::choosing::ArgmaxMean{}}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mablab::mc_bias(s, kArms, 1000, 1, 1'000'000));
  }
}
BENCHMARK(BM_McBiasGreedy)->Unit(benchmark::kMillisecond);

void BM_CertifyLilUcb(benchmark::State& state) {
  const auto set = mablab::find_rule_set("lil-ucb");
  for (auto _ : state) {
    benchmark::DoNotOptimize(mablab::certify(set, 10, 1));
  }
}
BENCHMARK(BM_CertifyLilUcb)->Unit(benchmark::kMillisecond);

}  // namespace
