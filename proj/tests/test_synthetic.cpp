#include <doctest.h>

#include <cmath>

#include "npfs/errors.hpp"
#include "npfs/gmm.hpp"
#include "npfs/selection.hpp"
#include "npfs/synthetic.hpp"
#include "support.hpp"

using npfs::Dataset;
using npfs::SyntheticSpec;

TEST_CASE("zero separation leaves every class at chance") {
  SyntheticSpec spec;
  spec.classes = 2;
  spec.dim = 4;
  spec.informative = {0, 1};
  spec.separation = 0.0;
  spec.n_per_class = 400;

  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    spec.seed = seed;
    const Dataset data = npfs::generate_synthetic(spec);
    const auto model = npfs::fit_full_model(data);
    total += npfs::overall_accuracy(npfs::predict(model, data.samples), data.labels);
  }
  const double mean_accuracy = total / 5.0;
  CHECK(mean_accuracy > 0.40);
  CHECK(mean_accuracy < 0.60);
}

TEST_CASE("a single strongly informative feature is selected first") {
  SyntheticSpec spec;
  spec.classes = 2;
  spec.dim = 6;
  spec.informative = {3};
  spec.separation = 4.0;
  spec.n_per_class = 60;

  npfs::SelectionConfig config;
  config.k = 5;
  config.delta = 0.0;
  config.max_variables = 2;

  int first_pick = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    spec.seed = seed;
    config.seed = seed;
    const auto state = npfs::forward_select(npfs::generate_synthetic(spec), config);
    if (!state.selected.empty() && state.selected[0] == 3) ++first_pick;
  }
  CHECK(first_pick >= 95);
}

TEST_CASE("empirical moments converge to the spec parameters") {
  SyntheticSpec spec;
  spec.classes = 2;
  spec.dim = 5;
  spec.informative = {1, 2};
  spec.separation = 1.5;
  spec.condition_number = 4.0;
  spec.n_per_class = 10000;
  spec.seed = 12;

  const Dataset data = npfs::generate_synthetic(spec);
  const auto fit = testsupport::naive_fit(data);
  const Eigen::VectorXd variances = npfs::synthetic_column_variances(spec);
  for (int c = 0; c < 2; ++c) {
    const Eigen::VectorXd mean = npfs::synthetic_class_mean(spec, c);
    for (int j = 0; j < spec.dim; ++j) {
      // sampling error at n = 1e4 is about 1/sqrt(n) ~ 0.01 per unit sd
      CHECK(std::abs(fit.means[c][j] - mean[j]) < 0.06 * std::sqrt(variances[j]) + 0.02);
      CHECK(std::abs(fit.covariances[c](j, j) - variances[j]) < 0.12 * variances[j]);
    }
    // off-diagonals are zero in the spec
    for (int a = 0; a < spec.dim; ++a) {
      for (int b = a + 1; b < spec.dim; ++b) {
        CHECK(std::abs(fit.covariances[c](a, b)) < 0.1);
      }
    }
  }
  // nuisance variance ladder spans the requested condition number
  double lo = 1e30, hi = 0.0;
  for (int j = 0; j < spec.dim; ++j) {
    if (j == 1 || j == 2) continue;
    lo = std::min(lo, variances[j]);
    hi = std::max(hi, variances[j]);
  }
  CHECK(hi / lo == doctest::Approx(4.0));
}

TEST_CASE("same seed reproduces the dataset, bad specs are rejected") {
  SyntheticSpec spec;
  spec.seed = 9;
  const Dataset a = npfs::generate_synthetic(spec);
  const Dataset b = npfs::generate_synthetic(spec);
  CHECK(a.samples == b.samples);

  SyntheticSpec bad = spec;
  bad.informative = {99};
  CHECK_THROWS_AS(npfs::generate_synthetic(bad), npfs::Error);
  bad = spec;
  bad.classes = 1;
  CHECK_THROWS_AS(npfs::generate_synthetic(bad), npfs::Error);
  bad = spec;
  bad.condition_number = 0.5;
  CHECK_THROWS_AS(npfs::generate_synthetic(bad), npfs::Error);
}
