#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "npfs/data_io.hpp"
#include "npfs/downdate.hpp"
#include "npfs/errors.hpp"
#include "npfs/model_store.hpp"
#include "npfs/oracle.hpp"
#include "npfs/report.hpp"
#include "npfs/selection.hpp"
#include "npfs/synthetic.hpp"

namespace npfs::cli {

namespace {

int parse_k(const std::string& text) {
  if (text == "loo") return SelectionConfig::kLeaveOneOut;
  int k = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto result = std::from_chars(begin, end, k);
  if (result.ec != std::errc() || result.ptr != end || k < 2) {
    raise(ErrorCode::InvalidK, "--k must be an integer >= 2 or 'loo'");
  }
  return k;
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

StoredModel build_stored_model(const Dataset& data,
                               const std::vector<int>& selected,
                               const std::optional<StandardizationParams>& params) {
  const GmmModel full = fit_full_model(data);
  StoredModel stored{marginalize(full, selected),
                     selected,
                     {},
                     data.dim(),
                     data.feature_names,
                     data.class_labels,
                     params};
  for (int f : selected) {
    stored.selected_names.push_back(
        data.feature_names.empty() ? "f" + std::to_string(f)
                                   : data.feature_names[f]);
  }
  return stored;
}

void check_trajectories_equal(const SelectionState& fast,
                              const SelectionState& naive) {
  const bool same_features = fast.selected == naive.selected;
  bool same_accuracy = fast.trace.size() == naive.trace.size();
  for (std::size_t i = 0; same_accuracy && i < fast.trace.size(); ++i) {
    same_accuracy = std::abs(fast.trace[i].accuracy - naive.trace[i].accuracy) <= 1e-9;
  }
  if (!same_features || !same_accuracy) {
    raise(ErrorCode::TrajectoryMismatch,
          "fast and naive selection disagree; benchmark timings would be "
          "meaningless");
  }
}

}  // namespace

int cmd_select(const SelectOptions& options) {
  return run_guarded([&] {
    Dataset data = load_csv(options.input, options.label_column, options.has_header);
    data.validate();

    std::optional<StandardizationParams> params;
    if (options.standardize) params = standardize(data);

    SelectionConfig config;
    config.k = parse_k(options.k);
    config.delta = options.delta;
    config.max_variables = options.max_variables;
    config.seed = options.seed;
    config.stratified = options.stratified;
    config.threads = options.threads;
    config.refold_each_iteration = options.refold_each_iteration;

    const SelectionState state = forward_select(data, config);

    RunReport report;
    report.input = options.input;
    report.label_column = options.label_column;
    report.k = options.k;
    report.delta = options.delta;
    report.max_variables = options.max_variables;
    report.seed = options.seed;
    report.standardized = options.standardize;
    report.stratified = options.stratified;
    report.threads = options.threads;
    report.refold_each_iteration = options.refold_each_iteration;
    report.n = data.n();
    report.dim = data.dim();
    report.classes = data.num_classes();
    if (params) report.constant_columns = params->constant_columns;
    report.selected = state.selected;
    for (int f : state.selected) {
      report.selected_names.push_back(data.feature_names.empty()
                                          ? "f" + std::to_string(f)
                                          : data.feature_names[f]);
    }
    report.trace = state.trace;
    report.stop_reason = to_string(state.stop_reason);
    report.fit_seconds = state.fit_seconds;
    report.selection_seconds = state.total_seconds - state.fit_seconds;
    report.total_seconds = state.total_seconds;

    std::cout << report.to_text();
    if (!options.report_path.empty()) {
      write_text_file(options.report_path, report.to_json());
    }
    if (!options.model_path.empty()) {
      if (state.selected.empty()) {
        std::cout << "no features selected, model file not written\n";
      } else {
        save_model(build_stored_model(data, state.selected, params),
                   options.model_path);
      }
    }
  });
}

int cmd_fit(const FitOptions& options) {
  return run_guarded([&] {
    Dataset data = load_csv(options.input, options.label_column, options.has_header);
    data.validate();

    std::optional<StandardizationParams> params;
    if (options.standardize) params = standardize(data);

    std::vector<int> features = options.features;
    if (features.empty()) {
      features.resize(data.dim());
      for (int j = 0; j < data.dim(); ++j) features[j] = j;
    }
    save_model(build_stored_model(data, features, params), options.model_path);
    std::cout << "fitted " << data.num_classes() << "-class model on "
              << features.size() << " feature(s) from " << data.n()
              << " samples -> " << options.model_path << "\n";
  });
}

int cmd_predict(const PredictOptions& options) {
  return run_guarded([&] {
    const StoredModel stored = load_model(options.model_path);

    Eigen::MatrixXd values;
    std::vector<std::string> names;
    std::vector<std::int64_t> truth;
    if (options.truth_column.empty()) {
      std::tie(values, names) = load_matrix_csv(options.input, options.has_header);
    } else {
      const Dataset data =
          load_csv(options.input, options.truth_column, options.has_header);
      values = data.samples;
      names = data.feature_names;
      truth.reserve(data.n());
      for (int label : data.labels) truth.push_back(data.class_labels[label]);
    }

    const Eigen::MatrixXd sliced = resolve_prediction_input(stored, values, names);
    const std::vector<int> predicted = predict(stored.model, sliced);

    std::vector<std::int64_t> predicted_labels;
    predicted_labels.reserve(predicted.size());
    for (int id : predicted) predicted_labels.push_back(stored.class_labels[id]);

    if (!options.output_path.empty()) {
      std::ofstream out(options.output_path);
      if (!out) raise(ErrorCode::ParseError, "cannot write '" + options.output_path + "'");
      out << "predicted\n";
      for (std::int64_t label : predicted_labels) out << label << "\n";
    }

    std::cout << "predicted " << predicted_labels.size() << " samples";
    if (!options.output_path.empty()) std::cout << " -> " << options.output_path;
    std::cout << "\n";
    if (!truth.empty()) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < truth.size(); ++i) {
        if (predicted_labels[i] == truth[i]) ++hits;
      }
      std::cout << "overall accuracy: "
                << static_cast<double>(hits) / static_cast<double>(truth.size())
                << "\n";
    }
  });
}

int cmd_generate(const GenerateOptions& options) {
  return run_guarded([&] {
    SyntheticSpec spec;
    spec.classes = options.classes;
    spec.dim = options.dim;
    spec.informative = options.informative;
    spec.separation = options.separation;
    spec.condition_number = options.condition_number;
    spec.n_per_class = options.n_per_class;
    spec.seed = options.seed;
    const Dataset data = generate_synthetic(spec);
    save_csv(data, options.output);
    std::cout << "wrote " << data.n() << " samples, " << data.dim()
              << " features, " << data.num_classes() << " classes -> "
              << options.output << "\n";
  });
}

int cmd_benchmark(const BenchmarkOptions& options) {
  return run_guarded([&] {
    SelectionConfig config;
    config.k = parse_k(options.k);
    config.delta = options.delta;
    config.max_variables = options.max_variables;
    config.seed = options.seed;
    config.threads = options.threads;

    BenchmarkReport report;
    report.k = options.k;
    report.delta = options.delta;
    report.max_variables = options.max_variables;
    report.seed = options.seed;
    report.repetitions = options.repetitions;

    std::optional<Dataset> csv_data;
    if (!options.input.empty()) {
      csv_data = load_csv(options.input, options.label_column, options.has_header);
      csv_data->validate();
      report.input = options.input;
    } else {
      report.input = "synthetic(classes=" + std::to_string(options.classes) +
                     ", dim=" + std::to_string(options.dim) +
                     ", n_per_class=" + std::to_string(options.n_per_class) + ")";
    }

    for (int rep = 0; rep < options.repetitions; ++rep) {
      Dataset data = [&] {
        if (csv_data) return *csv_data;
        SyntheticSpec spec;
        spec.classes = options.classes;
        spec.dim = options.dim;
        spec.informative = options.informative;
        spec.separation = options.separation;
        spec.condition_number = options.condition_number;
        spec.n_per_class = options.n_per_class;
        spec.seed = options.seed + rep;
        return generate_synthetic(spec);
      }();
      if (options.standardize) standardize(data);
      report.n = data.n();
      report.dim = data.dim();
      report.classes = data.num_classes();

      const SelectionState fast = forward_select(data, config);
      const SelectionState naive = oracle::naive_forward_select(data, config);
      check_trajectories_equal(fast, naive);

      report.runs.push_back(BenchmarkRepetition{
          fast.total_seconds, naive.total_seconds,
          static_cast<int>(fast.selected.size())});
      report.mean_fast_seconds += fast.total_seconds;
      report.mean_naive_seconds += naive.total_seconds;
    }
    report.mean_fast_seconds /= options.repetitions;
    report.mean_naive_seconds /= options.repetitions;
    report.speedup = report.mean_naive_seconds / report.mean_fast_seconds;
    report.small_instance =
        static_cast<long>(report.n) * report.dim < 10000;

    std::cout << report.to_text();
    if (!options.report_path.empty()) {
      write_text_file(options.report_path, report.to_json());
    }
  });
}

}  // namespace npfs::cli
