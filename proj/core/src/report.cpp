#include "npfs/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "npfs/errors.hpp"

namespace npfs {

namespace {

using nlohmann::json;

std::string trimmed(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

}  // namespace

std::string RunReport::to_json() const {
  json doc;
  doc["format"] = "npfs-report";
  doc["version"] = 1;
  doc["artifact_version"] = kArtifactVersion;
  doc["config"] = {
      {"input", input},
      {"label_column", label_column},
      {"k", k},
      {"delta", delta},
      {"max_variables", max_variables},
      {"seed", seed},
      {"standardize", standardized},
      {"stratified", stratified},
      {"threads", threads},
      {"refold_each_iteration", refold_each_iteration},
  };
  doc["data"] = {
      {"n", n},
      {"dim", dim},
      {"classes", classes},
      {"constant_columns", constant_columns},
  };
  doc["selected"] = selected;
  doc["selected_names"] = selected_names;
  json trace_doc = json::array();
  for (const auto& record : trace) {
    trace_doc.push_back({{"feature", record.feature},
                         {"accuracy", record.accuracy},
                         {"candidates_skipped", record.candidates_skipped},
                         {"seconds", record.seconds}});
  }
  doc["trace"] = std::move(trace_doc);
  doc["stop_reason"] = stop_reason;
  doc["timing"] = {
      {"fit_seconds", fit_seconds},
      {"selection_seconds", selection_seconds},
      {"total_seconds", total_seconds},
  };
  return doc.dump(2) + "\n";
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "forward selection (" << (k == "loo" ? "leave-one-out" : k + "-fold")
      << " CV, delta " << delta << ", max " << max_variables
      << " features, seed " << seed << ")\n";
  out << "data: " << n << " samples, " << dim << " features, " << classes
      << " classes";
  if (!constant_columns.empty()) {
    out << "  [warning: " << constant_columns.size() << " constant column(s)]";
  }
  out << "\n\n";
  out << "iter  feature  name              cv-accuracy  skipped  seconds\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& record = trace[i];
    const std::string name =
        i < selected_names.size() ? selected_names[i] : std::string("-");
    char line[160];
    std::snprintf(line, sizeof(line), "%4zu  %7d  %-16s  %11.6f  %7d  %7.3f\n",
                  i + 1, record.feature, name.c_str(), record.accuracy,
                  record.candidates_skipped, record.seconds);
    out << line;
  }
  if (trace.empty()) out << "(no feature met the acceptance threshold)\n";
  out << "\nstop reason: " << stop_reason << "\n";
  out << "timing: fit " << trimmed(fit_seconds) << " s, selection "
      << trimmed(selection_seconds) << " s, total " << trimmed(total_seconds)
      << " s\n";
  return out.str();
}

std::string BenchmarkReport::to_json() const {
  json doc;
  doc["format"] = "npfs-benchmark";
  doc["version"] = 1;
  doc["artifact_version"] = kArtifactVersion;
  doc["config"] = {
      {"input", input},        {"k", k},
      {"delta", delta},        {"max_variables", max_variables},
      {"seed", seed},          {"repetitions", repetitions},
  };
  doc["data"] = {{"n", n}, {"dim", dim}, {"classes", classes}};
  json run_doc = json::array();
  for (const auto& run : runs) {
    run_doc.push_back({{"fast_seconds", run.fast_seconds},
                       {"naive_seconds", run.naive_seconds},
                       {"selected_count", run.selected_count}});
  }
  doc["runs"] = std::move(run_doc);
  doc["mean_fast_seconds"] = mean_fast_seconds;
  doc["mean_naive_seconds"] = mean_naive_seconds;
  doc["speedup"] = speedup;
  doc["small_instance"] = small_instance;
  return doc.dump(2) + "\n";
}

std::string BenchmarkReport::to_text() const {
  std::ostringstream out;
  out << "benchmark: fast path vs naive refit on identical inputs\n";
  out << "data: " << n << " samples, " << dim << " features, " << classes
      << " classes; " << (k == "loo" ? "leave-one-out" : k + "-fold")
      << " CV, delta " << delta << ", max " << max_variables << " features, "
      << repetitions << " repetition(s)\n\n";
  out << "rep   fast [s]   naive [s]   selected\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    char line[120];
    std::snprintf(line, sizeof(line), "%3zu  %9.3f  %10.3f  %8d\n", r + 1,
                  runs[r].fast_seconds, runs[r].naive_seconds,
                  runs[r].selected_count);
    out << line;
  }
  out << "\nmean fast  " << trimmed(mean_fast_seconds) << " s\n";
  out << "mean naive " << trimmed(mean_naive_seconds) << " s\n";
  out << "speedup    " << trimmed(speedup) << "x\n";
  if (small_instance) {
    out << "note: small instance, timings are overhead-dominated\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << contents;
}

}  // namespace npfs
