#include <benchmark/benchmark.h>

#include "npfs/downdate.hpp"
#include "npfs/folds.hpp"
#include "npfs/gmm.hpp"
#include "npfs/synthetic.hpp"

namespace {

npfs::Dataset bench_dataset(int n_per_class, int dim, int classes) {
  npfs::SyntheticSpec spec;
  spec.classes = classes;
  spec.dim = dim;
  spec.informative = {0, 1, 2};
  spec.separation = 1.5;
  spec.condition_number = 4.0;
  spec.n_per_class = n_per_class;
  spec.seed = 17;
  return npfs::generate_synthetic(spec);
}

void BM_RefitRetainedRows(benchmark::State& state) {
  const auto data = bench_dataset(400, static_cast<int>(state.range(0)), 5);
  const auto plan = npfs::plan_folds(data.labels, 5, 1);
  const auto retained = plan.retained_indices(0);
  for (auto _ : state) {
    auto model = npfs::fit_full_model(data.rows(retained));
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_RefitRetainedRows)->Arg(20)->Arg(50)->Arg(100);

void BM_DowndateModel(benchmark::State& state) {
  const auto data = bench_dataset(400, static_cast<int>(state.range(0)), 5);
  const auto plan = npfs::plan_folds(data.labels, 5, 1);
  const auto full = npfs::fit_full_model(data);
  const auto summary = npfs::summarize_removed(data, plan.fold_indices(0));
  for (auto _ : state) {
    auto model = npfs::downdate_model(full, summary);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_DowndateModel)->Arg(20)->Arg(50)->Arg(100);

void BM_Marginalize(benchmark::State& state) {
  const auto data = bench_dataset(400, 100, 5);
  const auto full = npfs::fit_full_model(data);
  std::vector<int> features;
  for (int j = 0; j < state.range(0); ++j) features.push_back(j * 3);
  for (auto _ : state) {
    auto sub = npfs::marginalize(full, features);
    benchmark::DoNotOptimize(sub);
  }
}
BENCHMARK(BM_Marginalize)->Arg(5)->Arg(10)->Arg(20);

}  // namespace
