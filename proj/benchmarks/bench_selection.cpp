#include <benchmark/benchmark.h>

#include "npfs/data_io.hpp"
#include "npfs/folds.hpp"
#include "npfs/oracle.hpp"
#include "npfs/selection.hpp"
#include "npfs/synthetic.hpp"

namespace {

npfs::Dataset bench_dataset(int n_per_class, int dim) {
  npfs::SyntheticSpec spec;
  spec.classes = 5;
  spec.dim = dim;
  spec.informative = {0, 1, 2, 3, 4};
  spec.separation = 1.5;
  spec.condition_number = 4.0;
  spec.n_per_class = n_per_class;
  spec.seed = 23;
  auto data = npfs::generate_synthetic(spec);
  npfs::standardize(data);
  return data;
}

void BM_ScoreCandidateClosedForm(benchmark::State& state) {
  const auto data = bench_dataset(400, 100);
  const auto model = npfs::fit_full_model(data);
  const auto plan = npfs::plan_folds(data.labels, 5, 3);
  std::vector<int> features;
  for (int j = 0; j < state.range(0); ++j) features.push_back(j * 7);
  for (auto _ : state) {
    auto score = npfs::score_candidate(model, data, plan, features);
    benchmark::DoNotOptimize(score);
  }
}
BENCHMARK(BM_ScoreCandidateClosedForm)->Arg(1)->Arg(5)->Arg(10);

void BM_ScoreCandidateNaive(benchmark::State& state) {
  const auto data = bench_dataset(400, 100);
  const auto plan = npfs::plan_folds(data.labels, 5, 3);
  std::vector<int> features;
  for (int j = 0; j < state.range(0); ++j) features.push_back(j * 7);
  for (auto _ : state) {
    auto score = npfs::oracle::naive_cv_score(data, plan, features);
    benchmark::DoNotOptimize(score);
  }
}
BENCHMARK(BM_ScoreCandidateNaive)->Arg(1)->Arg(5)->Arg(10);

void BM_ForwardSelect(benchmark::State& state) {
  const auto data = bench_dataset(static_cast<int>(state.range(0)), 100);
  npfs::SelectionConfig config;
  config.k = 5;
  config.delta = 0.0;
  config.max_variables = 10;
  config.threads = 1;
  for (auto _ : state) {
    auto selection = npfs::forward_select(data, config);
    benchmark::DoNotOptimize(selection);
  }
}
BENCHMARK(BM_ForwardSelect)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ForwardSelectNaive(benchmark::State& state) {
  const auto data = bench_dataset(static_cast<int>(state.range(0)), 100);
  npfs::SelectionConfig config;
  config.k = 5;
  config.delta = 0.0;
  config.max_variables = 10;
  for (auto _ : state) {
    auto selection = npfs::oracle::naive_forward_select(data, config);
    benchmark::DoNotOptimize(selection);
  }
}
BENCHMARK(BM_ForwardSelectNaive)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
