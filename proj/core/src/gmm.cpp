#include "npfs/gmm.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <utility>

#include "npfs/errors.hpp"

namespace npfs {

namespace {

bool lower_factor_usable(const Eigen::MatrixXd& lower) {
  for (int i = 0; i < lower.rows(); ++i) {
    const double pivot = lower(i, i);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) return false;
  }
  return lower.allFinite();
}

}  // namespace

ClassFactor factorize_covariance(const Eigen::MatrixXd& covariance) {
  const int d = static_cast<int>(covariance.rows());
  const double trace_scale = covariance.trace() / static_cast<double>(d);
  constexpr double kEpsilons[] = {0.0, 1e-10, 1e-8, 1e-6};

  for (double eps : kEpsilons) {
    Eigen::MatrixXd attempt = covariance;
    const double jitter = eps * trace_scale;
    if (eps > 0.0) attempt.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(attempt);
    if (llt.info() != Eigen::Success) continue;
    ClassFactor factor;
    factor.chol_lower = llt.matrixL();
    if (!lower_factor_usable(factor.chol_lower)) continue;
    factor.log_det = 2.0 * factor.chol_lower.diagonal().array().log().sum();
    factor.jitter = jitter;
    return factor;
  }
  raise(ErrorCode::SingularCovariance,
        "covariance not positive definite after jitter escalation");
}

GmmModel::GmmModel(Eigen::VectorXd proportions,
                   std::vector<Eigen::VectorXd> means,
                   std::vector<Eigen::MatrixXd> covariances,
                   std::vector<long> class_counts,
                   long n_total)
    : proportions_(std::move(proportions)),
      means_(std::move(means)),
      covariances_(std::move(covariances)),
      class_counts_(std::move(class_counts)),
      n_total_(n_total),
      cache_(std::make_shared<FactorCache>()) {
  if (means_.size() != covariances_.size() ||
      means_.size() != class_counts_.size() ||
      static_cast<std::size_t>(proportions_.size()) != means_.size()) {
    raise(ErrorCode::LengthMismatch, "inconsistent per-class parameter counts");
  }
  cache_->factors.resize(means_.size());
}

std::shared_ptr<const ClassFactor> GmmModel::factor(int c) const {
  std::scoped_lock lock(cache_->mutex);
  if (!cache_->factors[c]) {
    cache_->factors[c] = std::make_shared<const ClassFactor>(
        factorize_covariance(covariances_[c]));
  }
  return cache_->factors[c];
}

double GmmModel::jitter_applied(int c) const {
  std::scoped_lock lock(cache_->mutex);
  return cache_->factors[c] ? cache_->factors[c]->jitter : 0.0;
}

int argmax_lowest(const Eigen::VectorXd& values) {
  int best = 0;
  for (int i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

GmmModel fit_full_model(const Dataset& data) {
  if (!data.samples.allFinite()) {
    raise(ErrorCode::NonFinite, "samples contain NaN or Inf");
  }
  const int num_classes = data.num_classes();
  const int d = data.dim();
  const long n = data.n();

  std::vector<Eigen::VectorXd> means(num_classes);
  std::vector<Eigen::MatrixXd> covariances(num_classes);
  std::vector<long> counts(num_classes);
  Eigen::VectorXd proportions(num_classes);

  for (int c = 0; c < num_classes; ++c) {
    const int n_c = data.class_counts[c];
    if (n_c < 2) {
      raise(ErrorCode::EmptyClass,
            "class " + std::to_string(c) + " has " + std::to_string(n_c) +
                " samples, need at least 2");
    }
    Eigen::MatrixXd rows(n_c, d);
    int filled = 0;
    for (int i = 0; i < data.n(); ++i) {
      if (data.labels[i] == c) rows.row(filled++) = data.samples.row(i);
    }
    const Eigen::VectorXd mean = rows.colwise().mean();
    rows.rowwise() -= mean.transpose();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    cov.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose(),
                                                   1.0 / static_cast<double>(n_c));
    cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
    means[c] = mean;
    covariances[c] = std::move(cov);
    counts[c] = n_c;
    proportions[c] = static_cast<double>(n_c) / static_cast<double>(n);
  }
  return GmmModel(std::move(proportions), std::move(means),
                  std::move(covariances), std::move(counts), n);
}

ClassScores decision_scores(const GmmModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dim()) {
    raise(ErrorCode::LengthMismatch, "sample dimension does not match model");
  }
  ClassScores scores;
  scores.q_values.resize(model.num_classes());
  for (int c = 0; c < model.num_classes(); ++c) {
    const auto factor = model.factor(c);
    const Eigen::VectorXd z =
        factor->chol_lower.triangularView<Eigen::Lower>().solve(x - model.mean(c));
    scores.q_values[c] =
        -z.squaredNorm() - factor->log_det + 2.0 * std::log(model.proportion(c));
  }
  scores.predicted = argmax_lowest(scores.q_values);
  return scores;
}

Eigen::VectorXd posterior(const GmmModel& model, const Eigen::VectorXd& x) {
  // log(pi_c p(x|c)) = Q_c/2 - (d/2) log(2 pi); the constant cancels.
  const ClassScores scores = decision_scores(model, x);
  Eigen::VectorXd log_weights = scores.q_values / 2.0;
  const double top = log_weights.maxCoeff();
  Eigen::VectorXd probs = (log_weights.array() - top).exp();
  probs /= probs.sum();
  return probs;
}

std::vector<int> predict(const GmmModel& model, const Eigen::MatrixXd& batch) {
  if (batch.cols() != model.dim()) {
    raise(ErrorCode::LengthMismatch, "batch dimension does not match model");
  }
  const int n = static_cast<int>(batch.rows());
  const int num_classes = model.num_classes();
  Eigen::MatrixXd q(n, num_classes);
  for (int c = 0; c < num_classes; ++c) {
    const auto factor = model.factor(c);
    Eigen::MatrixXd centered =
        (batch.rowwise() - model.mean(c).transpose()).transpose();
    factor->chol_lower.triangularView<Eigen::Lower>().solveInPlace(centered);
    const Eigen::VectorXd quadratic = centered.colwise().squaredNorm().transpose();
    q.col(c) = (-quadratic.array() - factor->log_det +
                2.0 * std::log(model.proportion(c)))
                   .matrix();
  }
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int c = 1; c < num_classes; ++c) {
      if (q(i, c) > q(i, best)) best = c;
    }
    labels[i] = best;
  }
  return labels;
}

double overall_accuracy(const std::vector<int>& predicted,
                        const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) {
    raise(ErrorCode::LengthMismatch, "prediction and truth lengths differ");
  }
  if (predicted.empty()) {
    raise(ErrorCode::LengthMismatch, "empty label vectors");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace npfs
