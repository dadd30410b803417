#include "npfs/downdate.hpp"

#include <cmath>
#include <string>

#include "npfs/errors.hpp"

namespace npfs {

RemovalSummary summarize_removed(const Dataset& data,
                                 const std::vector<int>& fold_indices) {
  check_index_list(fold_indices, data.n(), "fold");
  const int num_classes = data.num_classes();
  const int d = data.dim();

  RemovalSummary summary;
  summary.total_removed = static_cast<int>(fold_indices.size());
  summary.removed_counts.assign(num_classes, 0);
  summary.removed_means.assign(num_classes, Eigen::VectorXd::Zero(d));
  summary.removed_covariances.assign(num_classes, Eigen::MatrixXd::Zero(d, d));

  for (int index : fold_indices) {
    const int c = data.labels[index];
    ++summary.removed_counts[c];
    summary.removed_means[c] += data.samples.row(index).transpose();
  }
  for (int c = 0; c < num_classes; ++c) {
    if (summary.removed_counts[c] > 0) {
      summary.removed_means[c] /= static_cast<double>(summary.removed_counts[c]);
    }
  }
  for (int index : fold_indices) {
    const int c = data.labels[index];
    if (summary.removed_counts[c] < 2) continue;  // one-sample covariance is zero
    const Eigen::VectorXd centered =
        data.samples.row(index).transpose() - summary.removed_means[c];
    summary.removed_covariances[c].selfadjointView<Eigen::Lower>().rankUpdate(
        centered, 1.0 / static_cast<double>(summary.removed_counts[c]));
  }
  for (int c = 0; c < num_classes; ++c) {
    summary.removed_covariances[c].triangularView<Eigen::StrictlyUpper>() =
        summary.removed_covariances[c].transpose();
  }
  return summary;
}

double downdate_proportion(double proportion, long n, long removed_total,
                           long removed_in_class) {
  if (n - removed_total < 1) {
    raise(ErrorCode::DegenerateRemainder, "no samples left after removal");
  }
  if (removed_total == 0) return proportion;
  if (removed_in_class > std::lround(static_cast<double>(n) * proportion)) {
    raise(ErrorCode::DegenerateRemainder,
          "removing more samples than the class holds");
  }
  const double updated =
      (static_cast<double>(n) * proportion - static_cast<double>(removed_in_class)) /
      static_cast<double>(n - removed_total);
  constexpr double kSlack = 1e-12;
  if (updated < -kSlack || updated > 1.0 + kSlack) {
    raise(ErrorCode::DegenerateRemainder,
          "downdated proportion " + std::to_string(updated) + " outside [0,1]");
  }
  return std::min(1.0, std::max(0.0, updated));
}

Eigen::VectorXd downdate_mean(const Eigen::VectorXd& mean, long n_c, long nu_c,
                              const Eigen::VectorXd& removed_mean) {
  if (n_c - nu_c < 1) {
    raise(ErrorCode::DegenerateRemainder, "no class samples left after removal");
  }
  if (nu_c == 0) return mean;
  return (static_cast<double>(n_c) * mean -
          static_cast<double>(nu_c) * removed_mean) /
         static_cast<double>(n_c - nu_c);
}

Eigen::MatrixXd downdate_covariance(const Eigen::MatrixXd& covariance,
                                    long n_c, long nu_c,
                                    const Eigen::MatrixXd& removed_covariance,
                                    const Eigen::VectorXd& mean,
                                    const Eigen::VectorXd& removed_mean) {
  if (n_c - nu_c < 2) {
    raise(ErrorCode::DegenerateRemainder,
          "fewer than 2 class samples left after removal");
  }
  if (nu_c == 0) return covariance;
  const double retained = static_cast<double>(n_c - nu_c);
  const double scale_full = static_cast<double>(n_c) / retained;
  const double scale_removed = static_cast<double>(nu_c) / retained;
  const double scale_outer =
      static_cast<double>(n_c) * static_cast<double>(nu_c) / (retained * retained);
  const Eigen::VectorXd diff = mean - removed_mean;
  Eigen::MatrixXd updated = scale_full * covariance -
                            scale_removed * removed_covariance -
                            scale_outer * (diff * diff.transpose());
  updated = ((updated + updated.transpose()) / 2.0).eval();
  return updated;
}

GmmModel downdate_model(const GmmModel& model, const RemovalSummary& summary) {
  const int num_classes = model.num_classes();
  if (static_cast<int>(summary.removed_counts.size()) != num_classes) {
    raise(ErrorCode::LengthMismatch, "summary class count does not match model");
  }
  const long n = model.n_total();
  const long nu = summary.total_removed;

  Eigen::VectorXd proportions(num_classes);
  std::vector<Eigen::VectorXd> means(num_classes);
  std::vector<Eigen::MatrixXd> covariances(num_classes);
  std::vector<long> counts(num_classes);

  for (int c = 0; c < num_classes; ++c) {
    const long nu_c = summary.removed_counts[c];
    try {
      proportions[c] = downdate_proportion(model.proportion(c), n, nu, nu_c);
      means[c] = downdate_mean(model.mean(c), model.class_count(c), nu_c,
                               summary.removed_means[c]);
      covariances[c] = downdate_covariance(
          model.covariance(c), model.class_count(c), nu_c,
          summary.removed_covariances[c], model.mean(c),
          summary.removed_means[c]);
    } catch (const Error& e) {
      raise(e.code(), "class " + std::to_string(c) + ": " + e.what());
    }
    counts[c] = model.class_count(c) - nu_c;
  }
  return GmmModel(std::move(proportions), std::move(means),
                  std::move(covariances), std::move(counts), n - nu);
}

GmmModel loo_downdate(const GmmModel& model, const Eigen::VectorXd& x,
                      int removed_class) {
  if (removed_class < 0 || removed_class >= model.num_classes()) {
    raise(ErrorCode::IndexOutOfRange, "removed class id out of range");
  }
  if (x.size() != model.dim()) {
    raise(ErrorCode::LengthMismatch, "sample dimension does not match model");
  }
  const long n = model.n_total();
  const long n_c = model.class_count(removed_class);
  if (n_c < 3) {
    raise(ErrorCode::DegenerateRemainder,
          "leave-one-out needs at least 3 samples in class " +
              std::to_string(removed_class));
  }

  const int num_classes = model.num_classes();
  Eigen::VectorXd proportions(num_classes);
  std::vector<Eigen::VectorXd> means(num_classes);
  std::vector<Eigen::MatrixXd> covariances(num_classes);
  std::vector<long> counts(num_classes);

  for (int c = 0; c < num_classes; ++c) {
    if (c == removed_class) {
      proportions[c] =
          (static_cast<double>(n) * model.proportion(c) - 1.0) /
          static_cast<double>(n - 1);
      means[c] = (static_cast<double>(n_c) * model.mean(c) - x) /
                 static_cast<double>(n_c - 1);
      const double scale = static_cast<double>(n_c) / static_cast<double>(n_c - 1);
      const double outer_scale =
          static_cast<double>(n_c) /
          (static_cast<double>(n_c - 1) * static_cast<double>(n_c - 1));
      const Eigen::VectorXd diff = x - model.mean(c);
      Eigen::MatrixXd cov =
          scale * model.covariance(c) - outer_scale * (diff * diff.transpose());
      covariances[c] = ((cov + cov.transpose()) / 2.0).eval();
      counts[c] = n_c - 1;
    } else {
      proportions[c] = static_cast<double>(n) * model.proportion(c) /
                       static_cast<double>(n - 1);
      means[c] = model.mean(c);
      covariances[c] = model.covariance(c);
      counts[c] = model.class_count(c);
    }
  }
  return GmmModel(std::move(proportions), std::move(means),
                  std::move(covariances), std::move(counts), n - 1);
}

ClassScores loo_decision_shift(const ClassScores& scores, int removed_class,
                               long n) {
  if (n < 2) {
    raise(ErrorCode::DegenerateRemainder, "need n >= 2 for a leave-one-out shift");
  }
  // Removing one sample of another class changes Q_c only through the
  // proportion: pi_c goes from n_c/n to n_c/(n-1), so Q_c gains
  // 2 ln(n/(n-1)).
  const double shift =
      2.0 * std::log(static_cast<double>(n) / static_cast<double>(n - 1));
  ClassScores shifted = scores;
  for (int c = 0; c < shifted.q_values.size(); ++c) {
    if (c != removed_class) shifted.q_values[c] += shift;
  }
  shifted.predicted = argmax_lowest(shifted.q_values);
  return shifted;
}

GmmModel marginalize(const GmmModel& model, const std::vector<int>& features) {
  if (features.empty()) {
    raise(ErrorCode::EmptySelection, "empty feature selection");
  }
  check_index_list(features, model.dim(), "feature");
  const int p = static_cast<int>(features.size());
  const int num_classes = model.num_classes();

  std::vector<Eigen::VectorXd> means(num_classes);
  std::vector<Eigen::MatrixXd> covariances(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    means[c].resize(p);
    covariances[c].resize(p, p);
    for (int i = 0; i < p; ++i) {
      means[c][i] = model.mean(c)[features[i]];
      for (int j = 0; j < p; ++j) {
        covariances[c](i, j) = model.covariance(c)(features[i], features[j]);
      }
    }
  }
  return GmmModel(model.proportions(), std::move(means), std::move(covariances),
                  model.class_counts(), model.n_total());
}

}  // namespace npfs
