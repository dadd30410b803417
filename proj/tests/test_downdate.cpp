#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numeric>

#include "npfs/downdate.hpp"
#include "npfs/errors.hpp"
#include "npfs/gmm.hpp"
#include "support.hpp"

using npfs::Dataset;
using npfs::ErrorCode;
using npfs::GmmModel;
using npfs::RemovalSummary;

namespace {

Dataset three_points_one_class() {
  Eigen::MatrixXd samples(3, 1);
  samples << 0.0, 2.0, 4.0;
  return Dataset::from_rows(samples, {0, 0, 0});
}

// Refit oracle: parameters re-estimated from the retained rows only.
testsupport::NaiveParams refit_without(const Dataset& data,
                                       const std::vector<int>& removed) {
  std::vector<bool> gone(data.n(), false);
  for (int index : removed) gone[index] = true;
  std::vector<int> keep;
  for (int i = 0; i < data.n(); ++i) {
    if (!gone[i]) keep.push_back(i);
  }
  return testsupport::naive_fit(data.rows(keep));
}

void check_matches_refit(const GmmModel& downdated,
                         const testsupport::NaiveParams& refit, double tol) {
  for (int c = 0; c < downdated.num_classes(); ++c) {
    CHECK(testsupport::rel_err(downdated.proportion(c), refit.proportions[c]) < tol);
    CHECK(testsupport::rel_err(downdated.mean(c), refit.means[c]) < tol);
    CHECK(testsupport::frobenius_rel_err(downdated.covariance(c),
                                         refit.covariances[c]) < tol);
  }
}

}  // namespace

TEST_CASE("summary of an empty fold is all zeros") {
  const Dataset data = testsupport::random_dataset(1, 40, 2, 2);
  const RemovalSummary summary = npfs::summarize_removed(data, {});
  CHECK(summary.total_removed == 0);
  CHECK(summary.removed_counts == std::vector<int>{0, 0});
  CHECK(summary.removed_means[0].isZero());
  CHECK(summary.removed_covariances[1].isZero());
}

TEST_CASE("summary of a single row is the row itself with zero covariance") {
  const Dataset data = testsupport::random_dataset(2, 40, 3, 2);
  const RemovalSummary summary = npfs::summarize_removed(data, {5});
  const int c = data.labels[5];
  CHECK(summary.removed_counts[c] == 1);
  CHECK((summary.removed_means[c] - data.samples.row(5).transpose()).norm() == 0.0);
  CHECK(summary.removed_covariances[c].isZero());
}

TEST_CASE("summary of a ten-row fold matches a per-class recomputation") {
  const Dataset data = testsupport::random_dataset(3, 60, 4, 3);
  std::vector<int> fold{0, 3, 7, 11, 20, 25, 31, 44, 50, 59};
  const RemovalSummary summary = npfs::summarize_removed(data, fold);
  const auto naive = testsupport::naive_fit(data.rows(fold));
  int total = 0;
  for (int c = 0; c < 3; ++c) {
    total += summary.removed_counts[c];
    if (summary.removed_counts[c] == 0) continue;
    CHECK(summary.removed_counts[c] == naive.counts[c]);
    CHECK(testsupport::rel_err(summary.removed_means[c], naive.means[c]) < 1e-12);
    CHECK(testsupport::frobenius_rel_err(summary.removed_covariances[c],
                                         naive.covariances[c]) < 1e-12);
  }
  CHECK(total == summary.total_removed);
  CHECK_THROWS_AS(npfs::summarize_removed(data, {0, 0}), npfs::Error);
  CHECK_THROWS_AS(npfs::summarize_removed(data, {60}), npfs::Error);
}

TEST_CASE("proportion downdate follows the closed form") {
  CHECK(npfs::downdate_proportion(0.3, 10, 2, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(npfs::downdate_proportion(0.3, 10, 0, 0) == 0.3);  // identity, bitwise
  CHECK_THROWS_AS(npfs::downdate_proportion(0.5, 4, 4, 2), npfs::Error);

  // recount oracle over random folds; removals must be realizable, so the
  // part taken from other classes cannot exceed their total
  npfs::Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const long n = 20 + static_cast<long>(rng.next_below(200));
    const long n_c = 2 + static_cast<long>(rng.next_below(n - 4));
    const long nu_c = static_cast<long>(rng.next_below(n_c - 1));
    const long nu_rest = static_cast<long>(rng.next_below(n - n_c));
    const long nu = nu_c + nu_rest;
    if (n - nu < 1) continue;
    const double updated = npfs::downdate_proportion(
        static_cast<double>(n_c) / n, n, nu, nu_c);
    const double recount = static_cast<double>(n_c - nu_c) / (n - nu);
    CHECK(testsupport::rel_err(updated, recount) < 1e-12);
  }
}

TEST_CASE("mean downdate follows the closed form") {
  Eigen::VectorXd mean(1), removed(1);
  mean << 2.0;  // mean of {1, 0, 5}
  removed << 5.0;
  CHECK(npfs::downdate_mean(mean, 3, 1, removed)[0] == doctest::Approx(0.5));
  CHECK(npfs::downdate_mean(mean, 3, 0, removed)[0] == 2.0);
  CHECK_THROWS_AS(npfs::downdate_mean(mean, 3, 3, removed), npfs::Error);
}

TEST_CASE("covariance downdate reproduces the retained-sample estimate") {
  // 1-D class {0,2,4}: removing {4} must leave the biased covariance of {0,2}.
  const Dataset data = three_points_one_class();
  const auto full = testsupport::naive_fit(data);
  Eigen::MatrixXd removed_cov = Eigen::MatrixXd::Zero(1, 1);
  Eigen::VectorXd removed_mean(1);
  removed_mean << 4.0;
  const Eigen::MatrixXd updated = npfs::downdate_covariance(
      full.covariances[0], 3, 1, removed_cov, full.means[0], removed_mean);
  CHECK(updated(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(npfs::downdate_covariance(full.covariances[0], 3, 0, removed_cov,
                                  full.means[0], removed_mean)(0, 0) ==
        full.covariances[0](0, 0));
  CHECK_THROWS_AS(npfs::downdate_covariance(full.covariances[0], 3, 2,
                                            removed_cov, full.means[0],
                                            removed_mean),
                  npfs::Error);
}

TEST_CASE("covariance downdate matches refit on random 5-D folds") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Dataset data = testsupport::random_dataset(40 + seed, 80, 5, 1);
    npfs::Rng rng(seed);
    std::vector<int> rows(data.n());
    std::iota(rows.begin(), rows.end(), 0);
    rng.shuffle(rows);
    rows.resize(10 + rng.next_below(20));

    const auto full = testsupport::naive_fit(data);
    const auto removed = testsupport::naive_fit(data.rows(rows));
    const auto retained = refit_without(data, rows);

    const Eigen::MatrixXd updated = npfs::downdate_covariance(
        full.covariances[0], full.counts[0], removed.counts[0],
        removed.covariances[0], full.means[0], removed.means[0]);
    CHECK(testsupport::frobenius_rel_err(updated, retained.covariances[0]) < 1e-9);
    CHECK(updated == updated.transpose());  // symmetrized exactly
  }
}

TEST_CASE("model downdate with an empty summary is a bitwise no-op") {
  const Dataset data = testsupport::random_dataset(17, 60, 3, 3);
  const GmmModel model = npfs::fit_full_model(data);
  const GmmModel same = npfs::downdate_model(model, npfs::summarize_removed(data, {}));
  for (int c = 0; c < 3; ++c) {
    CHECK(same.proportion(c) == model.proportion(c));
    CHECK(same.mean(c) == model.mean(c));
    CHECK(same.covariance(c) == model.covariance(c));
  }
  CHECK(same.n_total() == model.n_total());
}

TEST_CASE("model downdate equals a refit on the retained rows") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset data = testsupport::random_dataset(700 + seed, 90, 4, 3);
    npfs::Rng rng(seed);
    std::vector<int> fold;
    for (int i = 0; i < data.n(); ++i) {
      if (rng.next_below(5) == 0) fold.push_back(i);
    }
    const GmmModel model = npfs::fit_full_model(data);
    const RemovalSummary summary = npfs::summarize_removed(data, fold);
    bool feasible = true;
    for (int c = 0; c < 3; ++c) {
      if (data.class_counts[c] - summary.removed_counts[c] < 2) feasible = false;
    }
    if (!feasible) continue;
    const GmmModel downdated = npfs::downdate_model(model, summary);
    check_matches_refit(downdated, refit_without(data, fold), 1e-9);

    const double proportion_sum = downdated.proportions().sum();
    CHECK(std::abs(proportion_sum - 1.0) < 1e-12);
  }
}

TEST_CASE("removing two disjoint folds sequentially equals removing their union") {
  const Dataset data = testsupport::random_dataset(55, 120, 3, 2);
  std::vector<int> fold_a, fold_b, both;
  for (int i = 0; i < data.n(); ++i) {
    if (i % 10 == 0) fold_a.push_back(i);
    if (i % 10 == 5) fold_b.push_back(i);
  }
  both = fold_a;
  both.insert(both.end(), fold_b.begin(), fold_b.end());

  const GmmModel model = npfs::fit_full_model(data);
  const GmmModel two_steps = npfs::downdate_model(
      npfs::downdate_model(model, npfs::summarize_removed(data, fold_a)),
      npfs::summarize_removed(data, fold_b));
  const GmmModel one_step =
      npfs::downdate_model(model, npfs::summarize_removed(data, both));
  for (int c = 0; c < 2; ++c) {
    CHECK(testsupport::rel_err(two_steps.proportion(c), one_step.proportion(c)) < 1e-9);
    CHECK(testsupport::rel_err(two_steps.mean(c), one_step.mean(c)) < 1e-9);
    CHECK(testsupport::frobenius_rel_err(two_steps.covariance(c),
                                         one_step.covariance(c)) < 1e-9);
  }
}

TEST_CASE("model downdate reports the class that became degenerate") {
  const Dataset data = testsupport::random_dataset(66, 12, 2, 3);  // 4 rows per class
  const GmmModel model = npfs::fit_full_model(data);
  std::vector<int> fold;
  for (int i = 0; i < data.n(); ++i) {
    if (data.labels[i] == 1) fold.push_back(i);  // empties class 1
  }
  try {
    npfs::downdate_model(model, npfs::summarize_removed(data, fold));
    FAIL("expected DegenerateRemainder");
  } catch (const npfs::Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateRemainder);
    CHECK(std::string(e.what()).find("class 1") != std::string::npos);
  }
}

TEST_CASE("leave-one-out downdate matches the closed form on {0,2,4}") {
  const Dataset data = three_points_one_class();
  const GmmModel model = npfs::fit_full_model(data);
  Eigen::VectorXd removed(1);
  removed << 4.0;
  const GmmModel downdated = npfs::loo_downdate(model, removed, 0);
  CHECK(downdated.mean(0)[0] == doctest::Approx(1.0));
  CHECK(downdated.covariance(0)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(downdated.class_count(0) == 2);
}

TEST_CASE("leave-one-out downdate equals a refit on n-1 rows") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset data = testsupport::random_dataset(810 + seed, 45, 3, 3);
    const GmmModel model = npfs::fit_full_model(data);
    npfs::Rng rng(seed);
    const int row = static_cast<int>(rng.next_below(data.n()));
    const GmmModel downdated =
        npfs::loo_downdate(model, data.samples.row(row).transpose(), data.labels[row]);
    check_matches_refit(downdated, refit_without(data, {row}), 1e-10);
  }
}

TEST_CASE("leave-one-out proportions are a recount") {
  const Dataset data = testsupport::random_dataset(4, 10, 2, 2);  // 5 per class
  const GmmModel model = npfs::fit_full_model(data);
  int row = 0;
  while (data.labels[row] != 0) ++row;
  const GmmModel downdated =
      npfs::loo_downdate(model, data.samples.row(row).transpose(), 0);
  CHECK(downdated.proportion(0) == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(downdated.proportion(1) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("leave-one-out requires three samples in the removed class") {
  Eigen::MatrixXd samples(5, 1);
  samples << 0.0, 1.0, 4.0, 5.0, 6.0;
  const Dataset data = Dataset::from_rows(samples, {0, 0, 1, 1, 1});
  const GmmModel model = npfs::fit_full_model(data);
  CHECK_THROWS_AS(npfs::loo_downdate(model, data.samples.row(0).transpose(), 0),
                  npfs::Error);
}

TEST_CASE("decision shift vanishes as n grows and matches recomputation") {
  npfs::ClassScores scores;
  scores.q_values = Eigen::VectorXd::Zero(3);
  const auto shifted_large = npfs::loo_decision_shift(scores, 0, 1000000000L);
  CHECK(std::abs(shifted_large.q_values[1]) < 1e-8);

  // n = 2: the non-member proportion goes from n_k/2 to n_k/1, so the score
  // moves by 2 ln 2.
  const auto shifted_small = npfs::loo_decision_shift(scores, 0, 2);
  CHECK(shifted_small.q_values[1] == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(shifted_small.q_values[0] == 0.0);  // member entry untouched
}

TEST_CASE("shifted scores equal full recomputation for non-member classes") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset data = testsupport::random_dataset(900 + seed, 60, 3, 3);
    const GmmModel model = npfs::fit_full_model(data);
    npfs::Rng rng(seed);
    const int row = static_cast<int>(rng.next_below(data.n()));
    const int removed_class = data.labels[row];
    const Eigen::VectorXd x = data.samples.row(row).transpose();

    const auto before = npfs::decision_scores(model, x);
    const auto shifted = npfs::loo_decision_shift(before, removed_class, model.n_total());
    const GmmModel downdated = npfs::loo_downdate(model, x, removed_class);
    const auto recomputed = npfs::decision_scores(downdated, x);

    std::vector<std::pair<double, int>> shifted_order, recomputed_order;
    for (int c = 0; c < 3; ++c) {
      if (c == removed_class) continue;
      CHECK(testsupport::rel_err(shifted.q_values[c], recomputed.q_values[c]) < 1e-10);
      shifted_order.emplace_back(shifted.q_values[c], c);
      recomputed_order.emplace_back(recomputed.q_values[c], c);
    }
    // rank invariance among the non-member classes
    std::sort(shifted_order.begin(), shifted_order.end());
    std::sort(recomputed_order.begin(), recomputed_order.end());
    for (std::size_t i = 0; i < shifted_order.size(); ++i) {
      CHECK(shifted_order[i].second == recomputed_order[i].second);
    }
  }
}

TEST_CASE("marginalizing to all features is the identity") {
  const Dataset data = testsupport::random_dataset(31, 50, 4, 2);
  const GmmModel model = npfs::fit_full_model(data);
  const GmmModel same = npfs::marginalize(model, {0, 1, 2, 3});
  for (int c = 0; c < 2; ++c) {
    CHECK(same.mean(c) == model.mean(c));
    CHECK(same.covariance(c) == model.covariance(c));
    CHECK(same.proportion(c) == model.proportion(c));
  }
}

TEST_CASE("marginalizing a 2-D model to one feature slices mean and variance") {
  const Dataset data = testsupport::random_dataset(32, 50, 2, 2);
  const GmmModel model = npfs::fit_full_model(data);
  const GmmModel sub = npfs::marginalize(model, {0});
  CHECK(sub.dim() == 1);
  for (int c = 0; c < 2; ++c) {
    CHECK(sub.mean(c)[0] == model.mean(c)[0]);
    CHECK(sub.covariance(c)(0, 0) == model.covariance(c)(0, 0));
  }
  CHECK_THROWS_AS(npfs::marginalize(model, {}), npfs::Error);
  CHECK_THROWS_AS(npfs::marginalize(model, {2}), npfs::Error);
}

TEST_CASE("marginalization commutes with fitting on sliced columns") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset data = testsupport::random_dataset(1000 + seed, 70, 6, 3);
    npfs::Rng rng(seed);
    std::vector<int> features;
    for (int j = 0; j < 6; ++j) {
      if (rng.next_below(2) == 0) features.push_back(j);
    }
    if (features.empty()) features.push_back(0);
    rng.shuffle(features);

    const GmmModel sliced_fit = npfs::fit_full_model(data.columns(features));
    const GmmModel marginal = npfs::marginalize(npfs::fit_full_model(data), features);
    for (int c = 0; c < 3; ++c) {
      CHECK(testsupport::rel_err(marginal.mean(c), sliced_fit.mean(c)) < 1e-12);
      CHECK(testsupport::frobenius_rel_err(marginal.covariance(c),
                                           sliced_fit.covariance(c)) < 1e-12);
    }
  }
}
