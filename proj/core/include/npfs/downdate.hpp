#pragma once

#include <Eigen/Core>

#include <vector>

#include "npfs/dataset.hpp"
#include "npfs/gmm.hpp"

namespace npfs {

// Per-class statistics of a removed sample subset, precomputed once per fold
// and reused across every candidate evaluation in an iteration.
struct RemovalSummary {
  int total_removed = 0;                            // nu
  std::vector<int> removed_counts;                  // nu_c per class
  std::vector<Eigen::VectorXd> removed_means;       // mean of removed rows
  std::vector<Eigen::MatrixXd> removed_covariances; // biased, zero when nu_c <= 1
};

RemovalSummary summarize_removed(const Dataset& data,
                                 const std::vector<int>& fold_indices);

// (n pi_c - nu_c) / (n - nu). Throws DegenerateRemainder when the remainder
// is empty or the result leaves [0,1] beyond 1e-12 slack.
double downdate_proportion(double proportion, long n, long removed_total,
                           long removed_in_class);

// (n_c mu_c - nu_c mu_removed) / (n_c - nu_c).
Eigen::VectorXd downdate_mean(const Eigen::VectorXd& mean, long n_c, long nu_c,
                              const Eigen::VectorXd& removed_mean);

// n_c/(n_c-nu_c) Sigma - nu_c/(n_c-nu_c) Sigma_removed
//   - n_c nu_c/(n_c-nu_c)^2 (mu - mu_removed)(mu - mu_removed)^T,
// symmetrized after evaluation.
Eigen::MatrixXd downdate_covariance(const Eigen::MatrixXd& covariance,
                                    long n_c, long nu_c,
                                    const Eigen::MatrixXd& removed_covariance,
                                    const Eigen::VectorXd& mean,
                                    const Eigen::VectorXd& removed_mean);

// Applies the three rules to every class; the input model is untouched and
// the result carries no cached factors.
GmmModel downdate_model(const GmmModel& model, const RemovalSummary& summary);

// Removes a single sample x of class removed_class: that class gets the
// leave-one-out parameter rules, every other class only rescales its
// proportion. Requires class_count(removed_class) >= 3.
GmmModel loo_downdate(const GmmModel& model, const Eigen::VectorXd& x,
                      int removed_class);

// After removing one sample of removed_class, the decision value of every
// other class changes only through its proportion; this applies that constant
// shift. The removed class entry is left as-is and must be recomputed from
// the downdated parameters before use; predicted is refreshed from the
// stored values.
ClassScores loo_decision_shift(const ClassScores& scores, int removed_class,
                               long n);

// Sub-model over the given features, in the given order: means and
// covariances sliced, proportions and counts unchanged.
GmmModel marginalize(const GmmModel& model, const std::vector<int>& features);

}  // namespace npfs
