#include "npfs/folds.hpp"

#include <algorithm>
#include <string>

#include "npfs/errors.hpp"
#include "npfs/rng.hpp"

namespace npfs {

std::vector<int> FoldPlan::fold_indices(int fold) const {
  std::vector<int> indices;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) indices.push_back(static_cast<int>(i));
  }
  return indices;
}

std::vector<int> FoldPlan::retained_indices(int fold) const {
  std::vector<int> indices;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) indices.push_back(static_cast<int>(i));
  }
  return indices;
}

FoldPlan plan_folds(const std::vector<int>& labels, int k, std::uint64_t seed,
                    bool stratified) {
  const int n = static_cast<int>(labels.size());
  if (k < 2 || k > n) {
    raise(ErrorCode::InvalidK,
          "k = " + std::to_string(k) + " outside [2, n = " + std::to_string(n) + "]");
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.stratified = stratified;
  plan.assignments.assign(labels.size(), 0);
  Rng rng(seed);

  if (stratified) {
    const int num_classes = 1 + *std::max_element(labels.begin(), labels.end());
    // One global round-robin cursor across classes keeps per-class counts
    // within 1 per fold and fold totals within 1 overall.
    int cursor = 0;
    for (int c = 0; c < num_classes; ++c) {
      std::vector<int> class_rows;
      for (int i = 0; i < n; ++i) {
        if (labels[i] == c) class_rows.push_back(i);
      }
      rng.shuffle(class_rows);
      for (int row : class_rows) plan.assignments[row] = cursor++ % k;
    }
  } else {
    std::vector<int> rows(labels.size());
    for (int i = 0; i < n; ++i) rows[i] = i;
    rng.shuffle(rows);
    for (int j = 0; j < n; ++j) plan.assignments[rows[j]] = j % k;
  }
  return plan;
}

}  // namespace npfs
