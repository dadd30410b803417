#pragma once

#include <cstdint>
#include <string>
#include <vector>

// One options struct and one entry point per subcommand. Each returns the
// process exit code: 0 success, 2 input error, 3 numerical failure,
// 4 trajectory mismatch.
namespace npfs::cli {

struct SelectOptions {
  std::string input;
  std::string label_column = "label";
  bool has_header = true;
  std::string k = "5";  // fold count or "loo"
  double delta = 0.005;
  int max_variables = 20;
  std::uint64_t seed = 0;
  bool standardize = true;
  bool stratified = true;
  int threads = 0;  // 0 = machine parallelism
  bool refold_each_iteration = false;
  std::string report_path;
  std::string model_path;
};

struct FitOptions {
  std::string input;
  std::string label_column = "label";
  bool has_header = true;
  bool standardize = true;
  std::vector<int> features;  // empty = all columns
  std::string model_path;
};

struct PredictOptions {
  std::string input;
  std::string model_path;
  std::string output_path;
  std::string truth_column;  // empty = unlabeled input
  bool has_header = true;
};

struct GenerateOptions {
  std::string output;
  int classes = 3;
  int dim = 20;
  std::vector<int> informative = {0, 1, 2};
  double separation = 2.0;
  double condition_number = 4.0;
  int n_per_class = 100;
  std::uint64_t seed = 0;
};

struct BenchmarkOptions {
  // data source: a csv path, or the synthetic spec below when empty
  std::string input;
  std::string label_column = "label";
  bool has_header = true;
  int classes = 5;
  int dim = 100;
  std::vector<int> informative = {0, 1, 2, 3, 4};
  double separation = 1.5;
  double condition_number = 4.0;
  int n_per_class = 400;

  std::string k = "5";
  double delta = 0.0;
  int max_variables = 10;
  std::uint64_t seed = 0;
  bool standardize = true;
  int repetitions = 5;
  int threads = 1;  // fast path threads; the naive baseline stays serial
  std::string report_path;
};

int cmd_select(const SelectOptions& options);
int cmd_fit(const FitOptions& options);
int cmd_predict(const PredictOptions& options);
int cmd_generate(const GenerateOptions& options);
int cmd_benchmark(const BenchmarkOptions& options);

}  // namespace npfs::cli
