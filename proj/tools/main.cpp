#include <CLI11.hpp>

#include "commands.hpp"
#include "npfs/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Forward feature selection for Gaussian mixture classifiers"};
  app.set_version_flag("--version", npfs::kArtifactVersion);
  app.require_subcommand(1);

  npfs::cli::SelectOptions select;
  auto* select_cmd = app.add_subcommand(
      "select", "Run forward selection on a labeled CSV and persist the model");
  select_cmd->add_option("--input", select.input, "training CSV")->required();
  select_cmd->add_option("--label-column", select.label_column,
                         "label column name or 0-based index");
  select_cmd->add_flag("!--no-header", select.has_header, "CSV has no header row");
  select_cmd->add_option("--k", select.k, "fold count or 'loo'");
  select_cmd->add_option("--delta", select.delta,
                         "minimum accuracy improvement per accepted feature");
  select_cmd->add_option("--max-variables", select.max_variables,
                         "maximum number of selected features");
  select_cmd->add_option("--seed", select.seed, "fold shuffling seed");
  select_cmd->add_flag("!--no-standardize", select.standardize,
                       "skip per-column standardization");
  select_cmd->add_flag("!--no-stratified", select.stratified,
                       "plain random folds instead of stratified ones");
  select_cmd->add_option("--threads", select.threads,
                         "candidate-scoring threads, 0 = machine parallelism");
  select_cmd->add_flag("--refold-each-iteration", select.refold_each_iteration,
                       "redraw the folds at every iteration");
  select_cmd->add_option("--output", select.report_path, "JSON report path");
  select_cmd->add_option("--model", select.model_path, "model JSON path");

  npfs::cli::FitOptions fit;
  auto* fit_cmd = app.add_subcommand(
      "fit", "Fit a Gaussian mixture model on given features and persist it");
  fit_cmd->add_option("--input", fit.input, "training CSV")->required();
  fit_cmd->add_option("--label-column", fit.label_column,
                      "label column name or 0-based index");
  fit_cmd->add_flag("!--no-header", fit.has_header, "CSV has no header row");
  fit_cmd->add_flag("!--no-standardize", fit.standardize,
                    "skip per-column standardization");
  fit_cmd->add_option("--features", fit.features,
                      "feature indices to keep (default: all)");
  fit_cmd->add_option("--model", fit.model_path, "model JSON path")->required();

  npfs::cli::PredictOptions predict;
  auto* predict_cmd =
      app.add_subcommand("predict", "Classify a CSV with a persisted model");
  predict_cmd->add_option("--input", predict.input, "CSV to classify")->required();
  predict_cmd->add_option("--model", predict.model_path, "model JSON path")
      ->required();
  predict_cmd->add_option("--output", predict.output_path,
                          "predicted-labels CSV path");
  predict_cmd->add_option("--truth-column", predict.truth_column,
                          "label column to score against, if present");
  predict_cmd->add_flag("!--no-header", predict.has_header, "CSV has no header row");

  npfs::cli::GenerateOptions generate;
  auto* generate_cmd =
      app.add_subcommand("generate", "Write a synthetic classification CSV");
  generate_cmd->add_option("--output", generate.output, "CSV path")->required();
  generate_cmd->add_option("--classes", generate.classes, "class count");
  generate_cmd->add_option("--dim", generate.dim, "feature count");
  generate_cmd->add_option("--informative", generate.informative,
                           "informative feature indices");
  generate_cmd->add_option("--separation", generate.separation,
                           "class mean separation on informative features");
  generate_cmd->add_option("--condition", generate.condition_number,
                           "nuisance variance ratio");
  generate_cmd->add_option("--n-per-class", generate.n_per_class,
                           "samples per class");
  generate_cmd->add_option("--seed", generate.seed, "generator seed");

  npfs::cli::BenchmarkOptions benchmark;
  auto* benchmark_cmd = app.add_subcommand(
      "benchmark",
      "Time the closed-form path against the naive refit baseline");
  benchmark_cmd->add_option("--input", benchmark.input,
                            "labeled CSV (default: synthetic data)");
  benchmark_cmd->add_option("--label-column", benchmark.label_column,
                            "label column name or 0-based index");
  benchmark_cmd->add_flag("!--no-header", benchmark.has_header,
                          "CSV has no header row");
  benchmark_cmd->add_option("--classes", benchmark.classes, "synthetic classes");
  benchmark_cmd->add_option("--dim", benchmark.dim, "synthetic features");
  benchmark_cmd->add_option("--informative", benchmark.informative,
                            "synthetic informative indices");
  benchmark_cmd->add_option("--separation", benchmark.separation,
                            "synthetic separation");
  benchmark_cmd->add_option("--condition", benchmark.condition_number,
                            "synthetic nuisance variance ratio");
  benchmark_cmd->add_option("--n-per-class", benchmark.n_per_class,
                            "synthetic samples per class");
  benchmark_cmd->add_option("--k", benchmark.k, "fold count or 'loo'");
  benchmark_cmd->add_option("--delta", benchmark.delta, "stopping threshold");
  benchmark_cmd->add_option("--max-variables", benchmark.max_variables,
                            "maximum selected features");
  benchmark_cmd->add_option("--seed", benchmark.seed, "seed");
  benchmark_cmd->add_flag("!--no-standardize", benchmark.standardize,
                          "skip standardization");
  benchmark_cmd->add_option("--repetitions", benchmark.repetitions,
                            "timed repetitions");
  benchmark_cmd->add_option("--threads", benchmark.threads,
                            "fast-path threads (naive baseline stays serial)");
  benchmark_cmd->add_option("--output", benchmark.report_path, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (select_cmd->parsed()) return npfs::cli::cmd_select(select);
  if (fit_cmd->parsed()) return npfs::cli::cmd_fit(fit);
  if (predict_cmd->parsed()) return npfs::cli::cmd_predict(predict);
  if (generate_cmd->parsed()) return npfs::cli::cmd_generate(generate);
  if (benchmark_cmd->parsed()) return npfs::cli::cmd_benchmark(benchmark);
  return 2;
}
