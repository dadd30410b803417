#pragma once

#include <cstdint>
#include <vector>

namespace npfs {

// Seeded partition of sample indices into k folds.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignments;  // fold id per sample index
  std::uint64_t seed = 0;
  bool stratified = true;

  std::vector<int> fold_indices(int fold) const;
  std::vector<int> retained_indices(int fold) const;
};

// Deterministic for a given (labels, k, seed). Stratified assignment keeps
// per-class fold counts within 1 of each other; fold sizes overall also stay
// within 1, so no fold is empty while k <= n.
FoldPlan plan_folds(const std::vector<int>& labels, int k, std::uint64_t seed,
                    bool stratified = true);

}  // namespace npfs
