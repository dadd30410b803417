#include "npfs/model_store.hpp"

#include <fstream>

#include <json.hpp>

#include "npfs/errors.hpp"

namespace npfs {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, int rows, int cols) {
  if (j.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    raise(ErrorCode::ParseError, "covariance entry count does not match dimension");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t flat = 0;
  for (int i = 0; i < rows; ++i) {
    for (int c = 0; c < cols; ++c) m(i, c) = j[flat++].get<double>();
  }
  return m;
}

}  // namespace

void save_model(const StoredModel& stored, const std::string& path) {
  json doc;
  doc["format"] = "npfs-model";
  doc["version"] = kModelFormatVersion;
  doc["original_dimension"] = stored.original_dimension;
  doc["original_feature_names"] = stored.original_feature_names;
  doc["selected_features"] = stored.selected_features;
  doc["selected_names"] = stored.selected_names;
  doc["n_total"] = stored.model.n_total();

  json classes = json::array();
  for (int c = 0; c < stored.model.num_classes(); ++c) {
    json entry;
    entry["label"] = stored.class_labels[c];
    entry["count"] = stored.model.class_count(c);
    entry["proportion"] = stored.model.proportion(c);
    entry["mean"] = vector_to_json(stored.model.mean(c));
    entry["covariance"] = matrix_to_json(stored.model.covariance(c));
    classes.push_back(std::move(entry));
  }
  doc["classes"] = std::move(classes);

  if (stored.standardization) {
    json std_doc;
    std_doc["mean"] = vector_to_json(stored.standardization->mean);
    std_doc["scale"] = vector_to_json(stored.standardization->scale);
    std_doc["constant_columns"] = stored.standardization->constant_columns;
    doc["standardization"] = std::move(std_doc);
  } else {
    doc["standardization"] = nullptr;
  }

  std::ofstream out(path);
  if (!out) raise(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

StoredModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ParseError, "cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    raise(ErrorCode::ParseError, "'" + path + "' is not valid JSON: " + e.what());
  }
  try {
    if (doc.at("format") != "npfs-model") {
      raise(ErrorCode::ParseError, "'" + path + "' is not a model file");
    }
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      raise(ErrorCode::ParseError,
            "unsupported model format version " + doc.at("version").dump());
    }

    const auto& classes = doc.at("classes");
    const int num_classes = static_cast<int>(classes.size());
    const auto& selected = doc.at("selected_features");
    const int p = static_cast<int>(selected.size());

    Eigen::VectorXd proportions(num_classes);
    std::vector<Eigen::VectorXd> means(num_classes);
    std::vector<Eigen::MatrixXd> covariances(num_classes);
    std::vector<long> counts(num_classes);
    std::vector<std::int64_t> labels(num_classes);
    for (int c = 0; c < num_classes; ++c) {
      const auto& entry = classes[c];
      proportions[c] = entry.at("proportion").get<double>();
      means[c] = vector_from_json(entry.at("mean"));
      covariances[c] = matrix_from_json(entry.at("covariance"), p, p);
      counts[c] = entry.at("count").get<long>();
      labels[c] = entry.at("label").get<std::int64_t>();
    }

    StoredModel stored{
        GmmModel(std::move(proportions), std::move(means), std::move(covariances),
                 std::move(counts), doc.at("n_total").get<long>()),
        doc.at("selected_features").get<std::vector<int>>(),
        doc.at("selected_names").get<std::vector<std::string>>(),
        doc.at("original_dimension").get<int>(),
        doc.at("original_feature_names").get<std::vector<std::string>>(),
        std::move(labels),
        std::nullopt};
    if (!doc.at("standardization").is_null()) {
      const auto& std_doc = doc.at("standardization");
      StandardizationParams params;
      params.mean = vector_from_json(std_doc.at("mean"));
      params.scale = vector_from_json(std_doc.at("scale"));
      params.constant_columns = std_doc.at("constant_columns").get<std::vector<int>>();
      stored.standardization = std::move(params);
    }
    return stored;
  } catch (const json::exception& e) {
    raise(ErrorCode::ParseError, "'" + path + "' is missing model fields: " + e.what());
  }
}

Eigen::MatrixXd resolve_prediction_input(const StoredModel& stored,
                                         const Eigen::MatrixXd& values,
                                         const std::vector<std::string>& names) {
  if (values.cols() != stored.original_dimension) {
    raise(ErrorCode::SchemaMismatch,
          "input has " + std::to_string(values.cols()) +
              " feature columns, model expects " +
              std::to_string(stored.original_dimension));
  }
  if (!names.empty() && !stored.original_feature_names.empty()) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (names[j] != stored.original_feature_names[j]) {
        raise(ErrorCode::SchemaMismatch,
              "column " + std::to_string(j) + " is named '" + names[j] +
                  "', model expects '" + stored.original_feature_names[j] + "'");
      }
    }
  }
  Eigen::MatrixXd prepared = values;
  if (stored.standardization) {
    prepared.rowwise() -= stored.standardization->mean.transpose();
    prepared.array().rowwise() /= stored.standardization->scale.transpose().array();
  }
  Eigen::MatrixXd sliced(prepared.rows(), stored.selected_features.size());
  for (std::size_t j = 0; j < stored.selected_features.size(); ++j) {
    sliced.col(static_cast<int>(j)) = prepared.col(stored.selected_features[j]);
  }
  return sliced;
}

}  // namespace npfs
