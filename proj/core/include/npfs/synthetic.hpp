#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "npfs/dataset.hpp"

namespace npfs {

// Synthetic Gaussian classification task. Class means differ only on the
// informative columns: informative column t raises the mean of class
// (t mod classes) by `separation`, everything else is shared. Columns are
// independent; informative columns have unit variance, the remaining ones
// take variances spread geometrically so that the ratio of the largest to
// the smallest equals condition_number.
struct SyntheticSpec {
  int classes = 3;
  int dim = 10;
  std::vector<int> informative = {0};
  double separation = 2.0;
  double condition_number = 1.0;
  int n_per_class = 100;
  std::uint64_t seed = 0;
};

Dataset generate_synthetic(const SyntheticSpec& spec);

// The exact population parameters behind generate_synthetic, for tests.
Eigen::VectorXd synthetic_class_mean(const SyntheticSpec& spec, int c);
Eigen::VectorXd synthetic_column_variances(const SyntheticSpec& spec);

}  // namespace npfs
