#include "npfs/oracle.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "npfs/errors.hpp"
#include "npfs/gmm.hpp"
#include "parallel_for.hpp"

namespace npfs::oracle {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kExcluded = -std::numeric_limits<double>::infinity();

void check_fold_counts(const Dataset& data, const std::vector<int>& retained,
                       int fold) {
  std::vector<int> counts(data.num_classes(), 0);
  for (int row : retained) ++counts[data.labels[row]];
  for (int c = 0; c < data.num_classes(); ++c) {
    if (counts[c] < 2) {
      raise(ErrorCode::DegenerateFold,
            "fold " + std::to_string(fold) + " leaves class " +
                std::to_string(c) + " with " + std::to_string(counts[c]) +
                " samples, need at least 2");
    }
  }
}

double refit_fold_accuracy(const Dataset& sliced, const std::vector<int>& retained,
                           const std::vector<int>& heldout) {
  const Dataset train = sliced.rows(retained);
  const GmmModel model = fit_full_model(train);
  const Dataset test = sliced.rows(heldout);
  return overall_accuracy(predict(model, test.samples), test.labels);
}

// Fold layout for either a k-fold plan or leave-one-out, so the greedy loop
// below has one shape.
struct FoldLayout {
  std::vector<std::vector<int>> heldout;
  std::vector<std::vector<int>> retained;
};

FoldLayout layout_from_plan(const Dataset& data, const FoldPlan& plan) {
  FoldLayout layout;
  layout.heldout.resize(plan.k);
  layout.retained.resize(plan.k);
  for (int u = 0; u < plan.k; ++u) {
    layout.heldout[u] = plan.fold_indices(u);
    if (layout.heldout[u].empty()) {
      raise(ErrorCode::DegenerateFold, "fold " + std::to_string(u) + " is empty");
    }
    layout.retained[u] = plan.retained_indices(u);
    check_fold_counts(data, layout.retained[u], u);
  }
  return layout;
}

FoldLayout layout_leave_one_out(const Dataset& data) {
  FoldLayout layout;
  const int n = data.n();
  layout.heldout.resize(n);
  layout.retained.resize(n);
  for (int i = 0; i < n; ++i) {
    layout.heldout[i] = {i};
    layout.retained[i].reserve(n - 1);
    for (int j = 0; j < n; ++j) {
      if (j != i) layout.retained[i].push_back(j);
    }
  }
  return layout;
}

double mean_layout_accuracy(const Dataset& sliced, const FoldLayout& layout) {
  double total = 0.0;
  for (std::size_t u = 0; u < layout.heldout.size(); ++u) {
    total += refit_fold_accuracy(sliced, layout.retained[u], layout.heldout[u]);
  }
  return total / static_cast<double>(layout.heldout.size());
}

}  // namespace

CvScore naive_cv_score(const Dataset& data, const FoldPlan& plan,
                       const std::vector<int>& features) {
  if (features.empty()) {
    raise(ErrorCode::EmptySelection, "no features to score");
  }
  const Dataset sliced = data.columns(features);
  const FoldLayout layout = layout_from_plan(data, plan);

  CvScore score;
  score.fold_accuracies.reserve(layout.heldout.size());
  for (std::size_t u = 0; u < layout.heldout.size(); ++u) {
    score.fold_accuracies.push_back(
        refit_fold_accuracy(sliced, layout.retained[u], layout.heldout[u]));
    score.mean_accuracy += score.fold_accuracies.back();
  }
  score.mean_accuracy /= static_cast<double>(layout.heldout.size());
  return score;
}

SelectionState naive_forward_select(const Dataset& data,
                                    const SelectionConfig& config,
                                    int threads) {
  if (config.delta < 0.0) {
    raise(ErrorCode::SpecError, "delta must be nonnegative");
  }
  if (config.max_variables < 1 || config.max_variables > data.dim()) {
    raise(ErrorCode::SpecError,
          "max_variables must lie in [1, " + std::to_string(data.dim()) + "]");
  }
  if (config.leave_one_out()) {
    for (int c = 0; c < data.num_classes(); ++c) {
      if (data.class_counts[c] < 3) {
        raise(ErrorCode::DegenerateRemainder,
              "leave-one-out needs at least 3 samples per class, class " +
                  std::to_string(c) + " has " +
                  std::to_string(data.class_counts[c]));
      }
    }
  }

  const auto total_start = Clock::now();
  FoldLayout layout =
      config.leave_one_out()
          ? layout_leave_one_out(data)
          : layout_from_plan(data, plan_folds(data.labels, config.k, config.seed,
                                              config.stratified));

  SelectionState state;
  state.available.resize(data.dim());
  std::iota(state.available.begin(), state.available.end(), 0);

  double previous_best = 0.0;
  int iteration = 0;
  while (true) {
    if (static_cast<int>(state.selected.size()) >= config.max_variables) {
      state.stop_reason = StopReason::MaxVariablesReached;
      break;
    }
    if (state.available.empty()) {
      state.stop_reason = StopReason::PoolExhausted;
      break;
    }
    const auto iteration_start = Clock::now();
    if (config.refold_each_iteration && !config.leave_one_out() && iteration > 0) {
      layout = layout_from_plan(
          data, plan_folds(data.labels, config.k, config.seed + iteration,
                           config.stratified));
    }

    std::vector<double> scores(state.available.size(), kExcluded);
    detail::parallel_for(
        static_cast<int>(state.available.size()), threads, [&](int j) {
          std::vector<int> features = state.selected;
          features.push_back(state.available[j]);
          try {
            scores[j] = mean_layout_accuracy(data.columns(features), layout);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularCovariance) throw;
          }
        });

    int best = -1;
    int skipped = 0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (scores[j] == kExcluded) {
        ++skipped;
        continue;
      }
      if (best < 0 || scores[j] > scores[best]) best = static_cast<int>(j);
    }
    if (best < 0) {
      if (iteration == 0) {
        raise(ErrorCode::NoFeasibleCandidate,
              "every candidate failed with SingularCovariance in the first "
              "iteration");
      }
      state.stop_reason = StopReason::DeltaNotMet;
      break;
    }
    if (scores[best] - previous_best < config.delta) {
      state.stop_reason = StopReason::DeltaNotMet;
      break;
    }

    const int feature = state.available[best];
    state.selected.push_back(feature);
    state.available.erase(state.available.begin() + best);
    state.trace.push_back(IterationRecord{
        feature, scores[best], skipped,
        std::chrono::duration<double>(Clock::now() - iteration_start).count()});
    previous_best = scores[best];
    ++iteration;
  }
  state.total_seconds =
      std::chrono::duration<double>(Clock::now() - total_start).count();
  return state;
}

}  // namespace npfs::oracle
