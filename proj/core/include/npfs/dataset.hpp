#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace npfs {

// Labeled sample matrix. Labels are stored as dense class ids 0..C-1; the
// label values seen on input are kept in class_labels for reporting.
struct Dataset {
  Eigen::MatrixXd samples;                 // n x d, one row per sample
  std::vector<int> labels;                 // size n, values in 0..C-1
  std::vector<int> class_counts;           // size C
  std::vector<std::int64_t> class_labels;  // size C, original label values
  std::vector<std::string> feature_names;  // size d, or empty

  int n() const { return static_cast<int>(samples.rows()); }
  int dim() const { return static_cast<int>(samples.cols()); }
  int num_classes() const { return static_cast<int>(class_counts.size()); }

  // Builds a Dataset from raw labels, remapping them to dense ids in
  // ascending order of label value. Throws NonFinite on NaN/Inf samples.
  static Dataset from_rows(Eigen::MatrixXd samples,
                           const std::vector<std::int64_t>& raw_labels,
                           std::vector<std::string> feature_names = {});

  // Full invariant check for pipeline entry points (C >= 2, finite values,
  // consistent counts). fit_full_model itself only needs per-class counts.
  void validate() const;

  // Column slice in the given order; labels unchanged.
  Dataset columns(const std::vector<int>& features) const;

  // Row subset in the given order; class ids and class_labels are preserved,
  // class_counts recomputed (counts may become zero).
  Dataset rows(const std::vector<int>& indices) const;
};

// Throws IndexOutOfRange unless every index is distinct and within [0, size).
void check_index_list(const std::vector<int>& indices, int size, const char* what);

}  // namespace npfs
