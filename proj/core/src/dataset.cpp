#include "npfs/dataset.hpp"

#include <algorithm>
#include <map>

#include "npfs/errors.hpp"

namespace npfs {

Dataset Dataset::from_rows(Eigen::MatrixXd samples,
                           const std::vector<std::int64_t>& raw_labels,
                           std::vector<std::string> feature_names) {
  const auto n = samples.rows();
  if (n < 1 || samples.cols() < 1) {
    raise(ErrorCode::SpecError, "dataset needs at least one row and one column");
  }
  if (static_cast<std::size_t>(n) != raw_labels.size()) {
    raise(ErrorCode::LengthMismatch, "label count does not match row count");
  }
  if (!samples.allFinite()) {
    raise(ErrorCode::NonFinite, "samples contain NaN or Inf");
  }
  if (!feature_names.empty() &&
      feature_names.size() != static_cast<std::size_t>(samples.cols())) {
    raise(ErrorCode::LengthMismatch, "feature name count does not match column count");
  }

  std::map<std::int64_t, int> id_of;
  for (std::int64_t raw : raw_labels) id_of.emplace(raw, 0);
  int next_id = 0;
  for (auto& [raw, id] : id_of) id = next_id++;

  Dataset out;
  out.samples = std::move(samples);
  out.labels.resize(raw_labels.size());
  out.class_counts.assign(id_of.size(), 0);
  out.class_labels.resize(id_of.size());
  for (const auto& [raw, id] : id_of) out.class_labels[id] = raw;
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    const int id = id_of.at(raw_labels[i]);
    out.labels[i] = id;
    ++out.class_counts[id];
  }
  out.feature_names = std::move(feature_names);
  return out;
}

void Dataset::validate() const {
  if (n() < 1 || dim() < 1) {
    raise(ErrorCode::SpecError, "dataset needs at least one row and one column");
  }
  if (num_classes() < 2) {
    raise(ErrorCode::SpecError, "dataset needs at least two classes");
  }
  if (labels.size() != static_cast<std::size_t>(n())) {
    raise(ErrorCode::LengthMismatch, "label count does not match row count");
  }
  if (!samples.allFinite()) {
    raise(ErrorCode::NonFinite, "samples contain NaN or Inf");
  }
  std::vector<int> counts(num_classes(), 0);
  for (int label : labels) {
    if (label < 0 || label >= num_classes()) {
      raise(ErrorCode::IndexOutOfRange, "class id out of range");
    }
    ++counts[label];
  }
  if (counts != class_counts) {
    raise(ErrorCode::LengthMismatch, "class_counts out of sync with labels");
  }
  for (int c = 0; c < num_classes(); ++c) {
    if (counts[c] == 0) {
      raise(ErrorCode::EmptyClass,
            "class " + std::to_string(c) + " has no samples");
    }
  }
}

Dataset Dataset::columns(const std::vector<int>& features) const {
  if (features.empty()) raise(ErrorCode::EmptySelection, "empty feature list");
  check_index_list(features, dim(), "feature");
  Dataset out;
  out.samples.resize(n(), static_cast<int>(features.size()));
  for (std::size_t j = 0; j < features.size(); ++j) {
    out.samples.col(static_cast<int>(j)) = samples.col(features[j]);
  }
  out.labels = labels;
  out.class_counts = class_counts;
  out.class_labels = class_labels;
  if (!feature_names.empty()) {
    out.feature_names.reserve(features.size());
    for (int f : features) out.feature_names.push_back(feature_names[f]);
  }
  return out;
}

Dataset Dataset::rows(const std::vector<int>& indices) const {
  check_index_list(indices, n(), "row");
  Dataset out;
  out.samples.resize(static_cast<int>(indices.size()), dim());
  out.labels.reserve(indices.size());
  out.class_counts.assign(num_classes(), 0);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.samples.row(static_cast<int>(i)) = samples.row(indices[i]);
    const int label = labels[indices[i]];
    out.labels.push_back(label);
    ++out.class_counts[label];
  }
  out.class_labels = class_labels;
  out.feature_names = feature_names;
  return out;
}

void check_index_list(const std::vector<int>& indices, int size, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(size), false);
  for (int index : indices) {
    if (index < 0 || index >= size) {
      raise(ErrorCode::IndexOutOfRange,
            std::string(what) + " index " + std::to_string(index) +
                " outside [0, " + std::to_string(size) + ")");
    }
    if (seen[static_cast<std::size_t>(index)]) {
      raise(ErrorCode::IndexOutOfRange,
            std::string(what) + " index " + std::to_string(index) + " repeated");
    }
    seen[static_cast<std::size_t>(index)] = true;
  }
}

}  // namespace npfs
