#pragma once

#include <Eigen/Core>

#include <memory>
#include <mutex>
#include <vector>

#include "npfs/dataset.hpp"

namespace npfs {

// Cholesky factor of one class covariance plus the quantities derived from it.
struct ClassFactor {
  Eigen::MatrixXd chol_lower;  // L with Sigma (+ jitter I) = L L^T
  double log_det = 0.0;        // log |Sigma + jitter I|
  double jitter = 0.0;         // diagonal regularization added, 0 if none
};

// Factorizes a symmetric covariance with an escalating jitter policy:
// plain attempt first, then eps * trace(Sigma)/d added to the diagonal for
// eps in {1e-10, 1e-8, 1e-6}. Throws SingularCovariance when all attempts
// fail.
ClassFactor factorize_covariance(const Eigen::MatrixXd& covariance);

// Supervised Gaussian mixture: one Gaussian per class with a prior
// proportion. Parameters are immutable after construction; the per-class
// factor cache fills lazily, is safe to fill from concurrent readers, and is
// shared by copies since they describe the same parameters.
class GmmModel {
 public:
  GmmModel(Eigen::VectorXd proportions,
           std::vector<Eigen::VectorXd> means,
           std::vector<Eigen::MatrixXd> covariances,
           std::vector<long> class_counts,
           long n_total);

  int num_classes() const { return static_cast<int>(means_.size()); }
  int dim() const { return means_.empty() ? 0 : static_cast<int>(means_[0].size()); }
  long n_total() const { return n_total_; }
  long class_count(int c) const { return class_counts_[c]; }
  const std::vector<long>& class_counts() const { return class_counts_; }
  double proportion(int c) const { return proportions_[c]; }
  const Eigen::VectorXd& proportions() const { return proportions_; }
  const Eigen::VectorXd& mean(int c) const { return means_[c]; }
  const Eigen::MatrixXd& covariance(int c) const { return covariances_[c]; }

  // Lazy per-class factor; throws SingularCovariance if the jitter policy
  // fails. Concurrent calls compute at most once per class.
  std::shared_ptr<const ClassFactor> factor(int c) const;

  // Regularization recorded for class c; 0 until the factor is computed.
  double jitter_applied(int c) const;

 private:
  struct FactorCache {
    std::mutex mutex;
    std::vector<std::shared_ptr<const ClassFactor>> factors;
  };

  Eigen::VectorXd proportions_;
  std::vector<Eigen::VectorXd> means_;
  std::vector<Eigen::MatrixXd> covariances_;
  std::vector<long> class_counts_;
  long n_total_ = 0;
  std::shared_ptr<FactorCache> cache_;
};

struct ClassScores {
  Eigen::VectorXd q_values;  // one quadratic discriminant value per class
  int predicted = 0;         // argmax, ties broken toward the lowest class id
};

// Index of the largest entry, ties broken toward the lowest index.
int argmax_lowest(const Eigen::VectorXd& values);

// Maximum-likelihood fit: proportions n_c/n, per-class sample means, and
// biased (1/n_c) covariances. Factors are not computed here.
GmmModel fit_full_model(const Dataset& data);

// Q_c(x) = -(x-mu_c)^T Sigma_c^{-1} (x-mu_c) - ln|Sigma_c| + 2 ln pi_c,
// evaluated through the Cholesky factor.
ClassScores decision_scores(const GmmModel& model, const Eigen::VectorXd& x);

// Class posterior p(c|x), computed in log space with max subtraction.
Eigen::VectorXd posterior(const GmmModel& model, const Eigen::VectorXd& x);

// Row-wise MAP prediction for a batch (one sample per row).
std::vector<int> predict(const GmmModel& model, const Eigen::MatrixXd& batch);

double overall_accuracy(const std::vector<int>& predicted,
                        const std::vector<int>& truth);

}  // namespace npfs
