#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

#include "npfs/dataset.hpp"
#include "npfs/gmm.hpp"
#include "npfs/rng.hpp"

// Test-only oracles. These recompute model quantities through deliberately
// different routes (explicit loops, dense inverses, raw determinants) so the
// library's Cholesky/downdate paths are checked against independent
// arithmetic.
namespace testsupport {

struct NaiveParams {
  std::vector<double> proportions;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covariances;
  std::vector<int> counts;
};

// Column-by-column mean and biased covariance with explicit loops.
inline NaiveParams naive_fit(const npfs::Dataset& data) {
  NaiveParams params;
  const int num_classes = data.num_classes();
  const int d = data.dim();
  params.proportions.resize(num_classes);
  params.means.resize(num_classes);
  params.covariances.resize(num_classes);
  params.counts.resize(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    std::vector<int> rows;
    for (int i = 0; i < data.n(); ++i) {
      if (data.labels[i] == c) rows.push_back(i);
    }
    const int n_c = static_cast<int>(rows.size());
    params.counts[c] = n_c;
    params.proportions[c] = static_cast<double>(n_c) / data.n();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < d; ++j) {
      double total = 0.0;
      for (int row : rows) total += data.samples(row, j);
      mean[j] = total / n_c;
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        double total = 0.0;
        for (int row : rows) {
          total += (data.samples(row, a) - mean[a]) * (data.samples(row, b) - mean[b]);
        }
        cov(a, b) = total / n_c;
      }
    }
    params.means[c] = std::move(mean);
    params.covariances[c] = std::move(cov);
  }
  return params;
}

// Quadratic discriminant values through an explicit inverse and raw
// determinant (LU based), never touching the library's factor path.
inline Eigen::VectorXd dense_inverse_scores(const npfs::GmmModel& model,
                                            const Eigen::VectorXd& x) {
  Eigen::VectorXd q(model.num_classes());
  for (int c = 0; c < model.num_classes(); ++c) {
    const Eigen::MatrixXd inverse = model.covariance(c).inverse();
    const Eigen::VectorXd diff = x - model.mean(c);
    q[c] = -diff.dot(inverse * diff) - std::log(model.covariance(c).determinant()) +
           2.0 * std::log(model.proportion(c));
  }
  return q;
}

// Posterior through the plain density formula.
inline Eigen::VectorXd direct_density_posterior(const npfs::GmmModel& model,
                                                const Eigen::VectorXd& x) {
  const int d = model.dim();
  Eigen::VectorXd weights(model.num_classes());
  for (int c = 0; c < model.num_classes(); ++c) {
    const Eigen::MatrixXd inverse = model.covariance(c).inverse();
    const Eigen::VectorXd diff = x - model.mean(c);
    const double density =
        std::exp(-0.5 * diff.dot(inverse * diff)) /
        (std::pow(2.0 * M_PI, d / 2.0) *
         std::sqrt(model.covariance(c).determinant()));
    weights[c] = model.proportion(c) * density;
  }
  return weights / weights.sum();
}

// Random labeled dataset with round-robin classes and reasonably conditioned
// class covariances.
inline npfs::Dataset random_dataset(std::uint64_t seed, int n, int d,
                                    int num_classes, double mean_spread = 2.0) {
  npfs::Rng rng(seed);
  std::vector<Eigen::VectorXd> class_means(num_classes);
  std::vector<Eigen::MatrixXd> class_transforms(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    class_means[c].resize(d);
    for (int j = 0; j < d; ++j) class_means[c][j] = mean_spread * rng.next_normal();
    Eigen::MatrixXd mix(d, d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) mix(a, b) = rng.next_normal();
    }
    class_transforms[c] =
        Eigen::MatrixXd::Identity(d, d) + 0.3 / std::sqrt(d) * mix;
  }
  Eigen::MatrixXd samples(n, d);
  std::vector<std::int64_t> labels(n);
  Eigen::VectorXd noise(d);
  for (int i = 0; i < n; ++i) {
    const int c = i % num_classes;
    for (int j = 0; j < d; ++j) noise[j] = rng.next_normal();
    samples.row(i) = (class_means[c] + class_transforms[c] * noise).transpose();
    labels[i] = c;
  }
  return npfs::Dataset::from_rows(std::move(samples), labels);
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i) worst = std::max(worst, rel_err(a[i], b[i]));
  return worst;
}

inline double frobenius_rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

}  // namespace testsupport
