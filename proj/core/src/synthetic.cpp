#include "npfs/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npfs/errors.hpp"
#include "npfs/rng.hpp"

namespace npfs {

namespace {

void check_spec(const SyntheticSpec& spec) {
  if (spec.classes < 2) raise(ErrorCode::SpecError, "need at least 2 classes");
  if (spec.dim < 1) raise(ErrorCode::SpecError, "need at least 1 feature");
  if (spec.n_per_class < 2) {
    raise(ErrorCode::SpecError, "need at least 2 samples per class");
  }
  if (spec.separation < 0.0) {
    raise(ErrorCode::SpecError, "separation must be nonnegative");
  }
  if (spec.condition_number < 1.0) {
    raise(ErrorCode::SpecError, "condition_number must be at least 1");
  }
  std::vector<bool> seen(spec.dim, false);
  for (int index : spec.informative) {
    if (index < 0 || index >= spec.dim) {
      raise(ErrorCode::SpecError,
            "informative index " + std::to_string(index) + " outside [0, " +
                std::to_string(spec.dim) + ")");
    }
    if (seen[index]) {
      raise(ErrorCode::SpecError,
            "informative index " + std::to_string(index) + " repeated");
    }
    seen[index] = true;
  }
}

}  // namespace

Eigen::VectorXd synthetic_class_mean(const SyntheticSpec& spec, int c) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(spec.dim);
  for (std::size_t t = 0; t < spec.informative.size(); ++t) {
    if (static_cast<int>(t) % spec.classes == c) {
      mean[spec.informative[t]] = spec.separation;
    }
  }
  return mean;
}

Eigen::VectorXd synthetic_column_variances(const SyntheticSpec& spec) {
  Eigen::VectorXd variances = Eigen::VectorXd::Ones(spec.dim);
  std::vector<int> nuisance;
  std::vector<bool> informative(spec.dim, false);
  for (int index : spec.informative) informative[index] = true;
  for (int j = 0; j < spec.dim; ++j) {
    if (!informative[j]) nuisance.push_back(j);
  }
  const int m = static_cast<int>(nuisance.size());
  if (m == 0) return variances;
  const double low = 1.0 / std::sqrt(spec.condition_number);
  const double high = std::sqrt(spec.condition_number);
  for (int t = 0; t < m; ++t) {
    const double frac = m == 1 ? 0.5 : static_cast<double>(t) / (m - 1);
    variances[nuisance[t]] = low * std::pow(high / low, frac);
  }
  return variances;
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  check_spec(spec);
  const Eigen::VectorXd variances = synthetic_column_variances(spec);
  const Eigen::VectorXd sd = variances.array().sqrt();

  Rng rng(spec.seed);
  const int n = spec.classes * spec.n_per_class;
  Eigen::MatrixXd samples(n, spec.dim);
  std::vector<std::int64_t> labels(n);

  int row = 0;
  for (int c = 0; c < spec.classes; ++c) {
    const Eigen::VectorXd mean = synthetic_class_mean(spec, c);
    for (int i = 0; i < spec.n_per_class; ++i, ++row) {
      for (int j = 0; j < spec.dim; ++j) {
        samples(row, j) = mean[j] + sd[j] * rng.next_normal();
      }
      labels[row] = c;
    }
  }

  std::vector<std::string> names;
  names.reserve(spec.dim);
  for (int j = 0; j < spec.dim; ++j) names.push_back("f" + std::to_string(j));
  return Dataset::from_rows(std::move(samples), labels, std::move(names));
}

}  // namespace npfs
