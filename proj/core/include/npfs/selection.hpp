#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npfs/dataset.hpp"
#include "npfs/downdate.hpp"
#include "npfs/folds.hpp"
#include "npfs/gmm.hpp"

namespace npfs {

// Cross-validated classification rate for one candidate feature set.
struct CvScore {
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

struct SelectionConfig {
  static constexpr int kLeaveOneOut = 0;

  int k = 5;                 // fold count, kLeaveOneOut selects the LOO path
  double delta = 0.005;      // minimum accuracy improvement per iteration
  int max_variables = 20;
  std::uint64_t seed = 0;
  bool stratified = true;
  int threads = 1;           // 0 = hardware concurrency
  // Redraws the fold partition at every iteration (seed + iteration) instead
  // of fixing it per run. Disables the cached-downdate reuse across
  // iterations, so it costs more.
  bool refold_each_iteration = false;

  bool leave_one_out() const { return k == kLeaveOneOut; }
};

struct IterationRecord {
  int feature = -1;
  double accuracy = 0.0;
  int candidates_skipped = 0;  // candidates excluded by SingularCovariance
  double seconds = 0.0;
};

enum class StopReason { DeltaNotMet, MaxVariablesReached, PoolExhausted };

const char* to_string(StopReason reason);

struct SelectionState {
  std::vector<int> selected;   // accepted features, in acceptance order
  std::vector<int> available;  // remaining candidate pool
  std::vector<IterationRecord> trace;
  StopReason stop_reason = StopReason::DeltaNotMet;
  double fit_seconds = 0.0;
  double total_seconds = 0.0;
};

// k-fold CV accuracy of `features` via the closed-form route: per fold the
// full-dimension model is downdated by the fold's removal summary,
// marginalized to `features`, and used to classify the held-out rows.
CvScore score_candidate(const GmmModel& model, const Dataset& data,
                        const FoldPlan& plan, const std::vector<int>& features);

// Greedy forward selection. The full model is fitted once; per-fold removal
// summaries and downdated full-dimension models are built once per run and
// every candidate is scored against their marginalizations. A candidate
// whose scoring fails with SingularCovariance in some fold is excluded from
// that iteration's argmax instead of aborting. Dispatches to
// loo_forward_select when config.k == kLeaveOneOut.
SelectionState forward_select(const Dataset& data, const SelectionConfig& config);

// Leave-one-out variant: every fold is a single sample. The sample's own
// class is re-scored from the leave-one-out downdated parameters; all other
// class scores reuse the full model plus the constant proportion shift.
// Requires at least 3 samples per class.
SelectionState loo_forward_select(const Dataset& data,
                                  const SelectionConfig& config);

}  // namespace npfs
