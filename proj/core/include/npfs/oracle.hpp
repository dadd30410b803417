#pragma once

#include <vector>

#include "npfs/dataset.hpp"
#include "npfs/folds.hpp"
#include "npfs/selection.hpp"

namespace npfs::oracle {

// Ground-truth CV scoring with no downdates and no marginalization: every
// fold refits a model from the raw retained rows restricted to `features`
// and classifies the held-out rows with it. This is the slow baseline the
// benchmark command times and the reference the fast path is tested against.
CvScore naive_cv_score(const Dataset& data, const FoldPlan& plan,
                       const std::vector<int>& features);

// Forward selection built on naive_cv_score, with the same fold plan,
// acceptance rule, tie-break, and SingularCovariance exclusion as
// forward_select. Runs single-threaded unless threads is set (fairness
// experiments only).
SelectionState naive_forward_select(const Dataset& data,
                                    const SelectionConfig& config,
                                    int threads = 1);

}  // namespace npfs::oracle
