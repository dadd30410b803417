#include <doctest.h>

#include <cmath>

#include "npfs/errors.hpp"
#include "npfs/folds.hpp"
#include "npfs/oracle.hpp"
#include "npfs/selection.hpp"
#include "npfs/synthetic.hpp"
#include "support.hpp"

using npfs::Dataset;
using npfs::FoldPlan;
using npfs::SelectionConfig;
using npfs::StopReason;

TEST_CASE("mirrored folds on symmetric data give equal fold accuracies") {
  // The dataset maps to itself under x -> -x with the classes swapped, and
  // that map exchanges the two folds, so their accuracies must agree.
  Eigen::MatrixXd samples(8, 1);
  samples << -3.0, -2.0, -1.0, 0.5, 3.0, 2.0, 1.0, -0.5;
  const Dataset data = Dataset::from_rows(samples, {0, 0, 0, 0, 1, 1, 1, 1});

  FoldPlan plan;
  plan.k = 2;
  plan.assignments = {0, 0, 1, 1, 1, 1, 0, 0};
  const auto score = npfs::oracle::naive_cv_score(data, plan, {0});
  CHECK(score.fold_accuracies[0] == score.fold_accuracies[1]);
}

TEST_CASE("naive scoring of a separating feature is one") {
  npfs::SyntheticSpec spec;
  spec.classes = 2;
  spec.dim = 1;
  spec.informative = {0};
  spec.separation = 12.0;
  spec.n_per_class = 20;
  spec.seed = 4;
  const Dataset data = npfs::generate_synthetic(spec);
  const auto plan = npfs::plan_folds(data.labels, 5, 4);
  CHECK(npfs::oracle::naive_cv_score(data, plan, {0}).mean_accuracy ==
        doctest::Approx(1.0));
}

TEST_CASE("one feature permits exactly one iteration") {
  npfs::SyntheticSpec spec;
  spec.classes = 2;
  spec.dim = 1;
  spec.informative = {0};
  spec.separation = 5.0;
  spec.n_per_class = 25;
  spec.seed = 8;
  const Dataset data = npfs::generate_synthetic(spec);

  SelectionConfig config;
  config.k = 5;
  config.delta = 0.0;
  config.max_variables = 1;
  const auto state = npfs::oracle::naive_forward_select(data, config);
  CHECK(state.selected == std::vector<int>{0});
  CHECK(state.trace.size() == 1);
  CHECK(state.stop_reason == StopReason::MaxVariablesReached);
}

TEST_CASE("delta above one stops before any acceptance") {
  npfs::SyntheticSpec spec;
  spec.classes = 2;
  spec.dim = 3;
  spec.informative = {0};
  spec.separation = 12.0;
  spec.n_per_class = 25;
  spec.seed = 2;
  const Dataset data = npfs::generate_synthetic(spec);

  SelectionConfig config;
  config.k = 5;
  config.delta = 1.5;
  config.max_variables = 3;
  const auto state = npfs::oracle::naive_forward_select(data, config);
  CHECK(state.selected.empty());
  CHECK(state.stop_reason == StopReason::DeltaNotMet);

  // With a perfectly separable feature, accuracy 1.0 meets delta = 1.0 from
  // the zero baseline exactly once.
  config.delta = 1.0;
  const auto one = npfs::oracle::naive_forward_select(data, config);
  CHECK(one.selected.size() == 1);
  CHECK(one.trace[0].accuracy == doctest::Approx(1.0));
  CHECK(one.stop_reason == StopReason::DeltaNotMet);
}

TEST_CASE("parallel oracle scoring matches the single-threaded oracle") {
  const Dataset data = testsupport::random_dataset(91, 70, 5, 2, 1.5);
  SelectionConfig config;
  config.k = 5;
  config.delta = 0.0;
  config.max_variables = 3;
  config.seed = 31;
  const auto serial = npfs::oracle::naive_forward_select(data, config, 1);
  const auto parallel = npfs::oracle::naive_forward_select(data, config, 4);
  REQUIRE(serial.selected == parallel.selected);
  for (std::size_t i = 0; i < serial.trace.size(); ++i) {
    CHECK(serial.trace[i].accuracy == parallel.trace[i].accuracy);
  }
}
