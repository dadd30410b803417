#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npfs/selection.hpp"

namespace npfs {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Everything needed to reproduce and inspect one selection run.
struct RunReport {
  // configuration echo
  std::string input;
  std::string label_column;
  std::string k;  // integer text or "loo"
  double delta = 0.0;
  int max_variables = 0;
  std::uint64_t seed = 0;
  bool standardized = true;
  bool stratified = true;
  int threads = 1;
  bool refold_each_iteration = false;

  // data summary
  int n = 0;
  int dim = 0;
  int classes = 0;
  std::vector<int> constant_columns;

  // outcome
  std::vector<int> selected;
  std::vector<std::string> selected_names;
  std::vector<IterationRecord> trace;
  std::string stop_reason;

  // timing breakdown
  double fit_seconds = 0.0;
  double selection_seconds = 0.0;
  double total_seconds = 0.0;

  std::string to_json() const;
  std::string to_text() const;
};

struct BenchmarkRepetition {
  double fast_seconds = 0.0;
  double naive_seconds = 0.0;
  int selected_count = 0;
};

struct BenchmarkReport {
  std::string input;  // path or synthetic description
  std::string k;
  double delta = 0.0;
  int max_variables = 0;
  std::uint64_t seed = 0;
  int repetitions = 0;
  int n = 0;
  int dim = 0;
  int classes = 0;

  std::vector<BenchmarkRepetition> runs;
  double mean_fast_seconds = 0.0;
  double mean_naive_seconds = 0.0;
  double speedup = 0.0;
  bool small_instance = false;  // timings likely overhead-dominated

  std::string to_json() const;
  std::string to_text() const;
};

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace npfs
