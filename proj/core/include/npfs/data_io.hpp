#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "npfs/dataset.hpp"

namespace npfs {

// Per-column centering/scaling computed from a training set. scale holds the
// population (1/n) standard deviation, with 1.0 substituted for constant
// columns so they are centered but not scaled.
struct StandardizationParams {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  std::vector<int> constant_columns;
};

StandardizationParams compute_standardization(const Dataset& train);
void apply_standardization(const StandardizationParams& params, Dataset& data);

// Computes parameters on train, applies them to train and every dataset in
// others.
StandardizationParams standardize(Dataset& train,
                                  const std::vector<Dataset*>& others = {});

// Plain comma-separated files: optional single header row, one sample per
// row, decimal-point reals, integer labels. label_column selects by header
// name, or by 0-based position when it parses as an integer.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 bool has_header = true);

// Matrix-only variant for unlabeled prediction inputs. Returns the values
// and the header names (empty when has_header is false).
std::pair<Eigen::MatrixXd, std::vector<std::string>> load_matrix_csv(
    const std::string& path, bool has_header = true);

// Writes features plus a final label column. A header row is emitted when
// the dataset carries feature names. Reals use 17 significant digits, so a
// save/load round trip reproduces the values exactly.
void save_csv(const Dataset& data, const std::string& path,
              const std::string& label_column = "label");

// Seeded draw of exactly n_per_class training rows per class; the rest goes
// to the test set. Every class must have more than n_per_class rows.
std::pair<Dataset, Dataset> split_per_class(const Dataset& data, int n_per_class,
                                            std::uint64_t seed);

}  // namespace npfs
