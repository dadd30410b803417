#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npfs/data_io.hpp"
#include "npfs/gmm.hpp"

namespace npfs {

// Persisted selection result: the marginalized model over the selected
// features, together with everything needed to apply it to a fresh file
// (column resolution, label values, standardization).
struct StoredModel {
  GmmModel model;  // dimension = selected_features.size()
  std::vector<int> selected_features;            // indices into the original columns
  std::vector<std::string> selected_names;       // empty when the source had no header
  int original_dimension = 0;
  std::vector<std::string> original_feature_names;
  std::vector<std::int64_t> class_labels;        // original label value per class id
  std::optional<StandardizationParams> standardization;
};

inline constexpr int kModelFormatVersion = 1;

void save_model(const StoredModel& stored, const std::string& path);
StoredModel load_model(const std::string& path);

// Validates a prediction input against the stored schema and returns the
// matrix sliced to the selected features, standardized when parameters were
// persisted. Throws SchemaMismatch on column-count or column-name conflicts.
Eigen::MatrixXd resolve_prediction_input(const StoredModel& stored,
                                         const Eigen::MatrixXd& values,
                                         const std::vector<std::string>& names);

}  // namespace npfs
