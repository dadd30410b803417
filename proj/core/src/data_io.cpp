#include "npfs/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "npfs/errors.hpp"
#include "npfs/rng.hpp"

namespace npfs {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (auto& field : fields) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
      field.pop_back();
    }
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
  }
  return fields;
}

std::string cell_name(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row + 1) + ", column " + std::to_string(col + 1);
}

double parse_real(const std::string& field, std::size_t row, std::size_t col) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end || field.empty()) {
    raise(ErrorCode::ParseError,
          "cannot parse '" + field + "' as a real number at " + cell_name(row, col));
  }
  if (!std::isfinite(value)) {
    raise(ErrorCode::ParseError,
          "non-finite value '" + field + "' at " + cell_name(row, col));
  }
  return value;
}

std::int64_t parse_label(const std::string& field, std::size_t row, std::size_t col) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end || field.empty()) {
    raise(ErrorCode::ParseError,
          "cannot parse '" + field + "' as an integer label at " + cell_name(row, col));
  }
  return value;
}

struct RawCsv {
  std::vector<std::string> header;  // empty when has_header is false
  std::vector<std::vector<std::string>> rows;
};

RawCsv read_raw_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::ParseError, "cannot open '" + path + "'");
  }
  RawCsv raw;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_fields(line);
    if (first && has_header) {
      raw.header = std::move(fields);
      first = false;
      continue;
    }
    first = false;
    if (!raw.rows.empty() && fields.size() != raw.rows.front().size()) {
      raise(ErrorCode::ParseError,
            "row " + std::to_string(raw.rows.size() + 1) + " has " +
                std::to_string(fields.size()) + " fields, expected " +
                std::to_string(raw.rows.front().size()));
    }
    raw.rows.push_back(std::move(fields));
  }
  if (raw.rows.empty()) {
    raise(ErrorCode::ParseError, "'" + path + "' contains no data rows");
  }
  if (!raw.header.empty() && raw.header.size() != raw.rows.front().size()) {
    raise(ErrorCode::ParseError, "header width does not match data rows");
  }
  return raw;
}

// Label column selector: integer strings are treated as 0-based positions.
int resolve_label_column(const RawCsv& raw, const std::string& label_column) {
  const int width = static_cast<int>(raw.rows.front().size());
  int position = 0;
  const char* begin = label_column.data();
  const char* end = begin + label_column.size();
  const auto result = std::from_chars(begin, end, position);
  if (result.ec == std::errc() && result.ptr == end && !label_column.empty()) {
    if (position < 0 || position >= width) {
      raise(ErrorCode::MissingLabelColumn,
            "label column index " + label_column + " outside [0, " +
                std::to_string(width) + ")");
    }
    return position;
  }
  for (std::size_t j = 0; j < raw.header.size(); ++j) {
    if (raw.header[j] == label_column) return static_cast<int>(j);
  }
  raise(ErrorCode::MissingLabelColumn,
        "no column named '" + label_column + "'" +
            (raw.header.empty() ? " (file has no header)" : ""));
}

void format_real(std::string& out, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  out += buffer;
}

}  // namespace

StandardizationParams compute_standardization(const Dataset& train) {
  const int d = train.dim();
  StandardizationParams params;
  params.mean = train.samples.colwise().mean();
  params.scale.resize(d);
  for (int j = 0; j < d; ++j) {
    const double variance =
        (train.samples.col(j).array() - params.mean[j]).square().mean();
    const double sd = std::sqrt(variance);
    if (sd > 0.0) {
      params.scale[j] = sd;
    } else {
      params.scale[j] = 1.0;
      params.constant_columns.push_back(j);
    }
  }
  return params;
}

void apply_standardization(const StandardizationParams& params, Dataset& data) {
  if (data.dim() != params.mean.size()) {
    raise(ErrorCode::SchemaMismatch,
          "dataset has " + std::to_string(data.dim()) +
              " columns, standardization expects " +
              std::to_string(params.mean.size()));
  }
  data.samples.rowwise() -= params.mean.transpose();
  data.samples.array().rowwise() /= params.scale.transpose().array();
}

StandardizationParams standardize(Dataset& train,
                                  const std::vector<Dataset*>& others) {
  StandardizationParams params = compute_standardization(train);
  apply_standardization(params, train);
  for (Dataset* other : others) apply_standardization(params, *other);
  return params;
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 bool has_header) {
  const RawCsv raw = read_raw_csv(path, has_header);
  const int label_col = resolve_label_column(raw, label_column);
  const int width = static_cast<int>(raw.rows.front().size());
  const int d = width - 1;
  if (d < 1) {
    raise(ErrorCode::ParseError, "no feature columns besides the label");
  }

  Eigen::MatrixXd samples(raw.rows.size(), d);
  std::vector<std::int64_t> labels(raw.rows.size());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    int out_col = 0;
    for (int j = 0; j < width; ++j) {
      if (j == label_col) {
        labels[i] = parse_label(raw.rows[i][j], i, j);
      } else {
        samples(static_cast<int>(i), out_col++) = parse_real(raw.rows[i][j], i, j);
      }
    }
  }

  std::vector<std::string> names;
  if (!raw.header.empty()) {
    for (int j = 0; j < width; ++j) {
      if (j != label_col) names.push_back(raw.header[j]);
    }
  }
  return Dataset::from_rows(std::move(samples), labels, std::move(names));
}

std::pair<Eigen::MatrixXd, std::vector<std::string>> load_matrix_csv(
    const std::string& path, bool has_header) {
  const RawCsv raw = read_raw_csv(path, has_header);
  const int width = static_cast<int>(raw.rows.front().size());
  Eigen::MatrixXd values(raw.rows.size(), width);
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    for (int j = 0; j < width; ++j) {
      values(static_cast<int>(i), j) = parse_real(raw.rows[i][j], i, j);
    }
  }
  return {std::move(values), raw.header};
}

void save_csv(const Dataset& data, const std::string& path,
              const std::string& label_column) {
  std::ofstream out(path);
  if (!out) {
    raise(ErrorCode::ParseError, "cannot write '" + path + "'");
  }
  std::string line;
  if (!data.feature_names.empty()) {
    for (const auto& name : data.feature_names) {
      line += name;
      line += ',';
    }
    line += label_column;
    out << line << '\n';
  }
  for (int i = 0; i < data.n(); ++i) {
    line.clear();
    for (int j = 0; j < data.dim(); ++j) {
      format_real(line, data.samples(i, j));
      line += ',';
    }
    line += std::to_string(data.class_labels[data.labels[i]]);
    out << line << '\n';
  }
}

std::pair<Dataset, Dataset> split_per_class(const Dataset& data, int n_per_class,
                                            std::uint64_t seed) {
  if (n_per_class < 1) {
    raise(ErrorCode::SpecError, "n_per_class must be at least 1");
  }
  for (int c = 0; c < data.num_classes(); ++c) {
    if (data.class_counts[c] <= n_per_class) {
      raise(ErrorCode::InsufficientClassSamples,
            "class " + std::to_string(c) + " has " +
                std::to_string(data.class_counts[c]) +
                " samples, need more than " + std::to_string(n_per_class));
    }
  }
  Rng rng(seed);
  std::vector<int> train_rows;
  std::vector<int> test_rows;
  for (int c = 0; c < data.num_classes(); ++c) {
    std::vector<int> class_rows;
    for (int i = 0; i < data.n(); ++i) {
      if (data.labels[i] == c) class_rows.push_back(i);
    }
    rng.shuffle(class_rows);
    for (std::size_t j = 0; j < class_rows.size(); ++j) {
      (j < static_cast<std::size_t>(n_per_class) ? train_rows : test_rows)
          .push_back(class_rows[j]);
    }
  }
  return {data.rows(train_rows), data.rows(test_rows)};
}

}  // namespace npfs
