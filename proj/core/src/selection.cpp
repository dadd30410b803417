#include "npfs/selection.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "npfs/errors.hpp"
#include "parallel_for.hpp"

namespace npfs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kExcluded = -std::numeric_limits<double>::infinity();

int argmax_in_row(const Eigen::MatrixXd& values, int row) {
  int best = 0;
  for (int c = 1; c < values.cols(); ++c) {
    if (values(row, c) > values(row, best)) best = c;
  }
  return best;
}

Eigen::VectorXd slice_vector(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

Eigen::MatrixXd slice_square(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  Eigen::MatrixXd out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      out(i, j) = m(idx[i], idx[j]);
    }
  }
  return out;
}

Eigen::MatrixXd slice_columns(const Eigen::MatrixXd& x, const std::vector<int>& idx) {
  Eigen::MatrixXd out(x.rows(), idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(j) = x.col(idx[j]);
  return out;
}

// Plain Cholesky attempt, no jitter; false when the factor is not usable.
bool plain_cholesky(const Eigen::MatrixXd& m, Eigen::MatrixXd& lower) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  for (int i = 0; i < lower.rows(); ++i) {
    if (!(lower(i, i) > 0.0) || !std::isfinite(lower(i, i))) return false;
  }
  return lower.allFinite();
}

// One fold of a fixed plan: the closed-form downdated full-dimension model
// plus the held-out block it is scored on.
struct FoldContext {
  GmmModel downdated;
  Eigen::MatrixXd heldout;
  std::vector<int> heldout_labels;
};

void check_fold_feasible(const GmmModel& model, const RemovalSummary& summary,
                         int fold) {
  if (model.n_total() - summary.total_removed < 1) {
    raise(ErrorCode::DegenerateFold,
          "fold " + std::to_string(fold) + " removes every sample");
  }
  for (int c = 0; c < model.num_classes(); ++c) {
    const long retained = model.class_count(c) - summary.removed_counts[c];
    if (retained < 2) {
      raise(ErrorCode::DegenerateFold,
            "fold " + std::to_string(fold) + " leaves class " +
                std::to_string(c) + " with " + std::to_string(retained) +
                " samples, need at least 2");
    }
  }
}

std::vector<FoldContext> build_fold_contexts(const GmmModel& full,
                                             const Dataset& data,
                                             const FoldPlan& plan) {
  if (plan.assignments.size() != static_cast<std::size_t>(data.n())) {
    raise(ErrorCode::LengthMismatch, "fold plan does not match dataset size");
  }
  if (plan.k < 2) {
    raise(ErrorCode::InvalidK, "fold plan needs at least 2 folds");
  }
  std::vector<FoldContext> folds;
  folds.reserve(plan.k);
  for (int u = 0; u < plan.k; ++u) {
    const std::vector<int> removed = plan.fold_indices(u);
    if (removed.empty()) {
      raise(ErrorCode::DegenerateFold, "fold " + std::to_string(u) + " is empty");
    }
    const RemovalSummary summary = summarize_removed(data, removed);
    check_fold_feasible(full, summary, u);
    FoldContext fold{downdate_model(full, summary),
                     Eigen::MatrixXd(removed.size(), data.dim()),
                     {}};
    fold.heldout_labels.reserve(removed.size());
    for (std::size_t i = 0; i < removed.size(); ++i) {
      fold.heldout.row(static_cast<int>(i)) = data.samples.row(removed[i]);
      fold.heldout_labels.push_back(data.labels[removed[i]]);
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

// Marginalize-then-predict route for one fold, exactly as score_candidate
// defines it. Factorization goes through the jitter policy.
double fold_accuracy(const FoldContext& fold, const std::vector<int>& features) {
  const GmmModel sub = marginalize(fold.downdated, features);
  const std::vector<int> labels = predict(sub, slice_columns(fold.heldout, features));
  return overall_accuracy(labels, fold.heldout_labels);
}

// Per-iteration state for one (fold, class): the Cholesky factor of the
// selected-feature covariance and the solved/centered held-out block, shared
// by every candidate. Extending the factor by the candidate row then costs
// O(p^2) per class plus O(p) per sample instead of a fresh O(p^3)
// factorization and O(p^2) solves.
struct ClassBase {
  Eigen::MatrixXd chol;    // p x p lower factor
  Eigen::MatrixXd z_base;  // p x n_u, L^{-1} (X_sel - mu_sel)^T
  Eigen::VectorXd q_base;  // n_u, column squared norms of z_base
  double log_det = 0.0;
  double two_ln_pi = 0.0;
};

struct FoldBase {
  std::vector<ClassBase> classes;
  bool fast_ok = true;  // false: fall back to marginalize-and-refactor
};

class KfoldScorer {
 public:
  KfoldScorer(const std::vector<FoldContext>& folds, int num_classes)
      : folds_(&folds), num_classes_(num_classes) {}

  void rebind(const std::vector<FoldContext>& folds) { folds_ = &folds; }

  void begin_iteration(const std::vector<int>& selected) {
    selected_ = selected;
    const int p = static_cast<int>(selected.size());
    bases_.assign(folds_->size(), FoldBase{});
    for (std::size_t u = 0; u < folds_->size(); ++u) {
      const FoldContext& fold = (*folds_)[u];
      const int n_u = static_cast<int>(fold.heldout.rows());
      FoldBase& base = bases_[u];
      base.classes.resize(num_classes_);
      for (int c = 0; c < num_classes_ && base.fast_ok; ++c) {
        ClassBase& cb = base.classes[c];
        cb.two_ln_pi = 2.0 * std::log(fold.downdated.proportion(c));
        if (p == 0) {
          cb.z_base.resize(0, n_u);
          cb.q_base = Eigen::VectorXd::Zero(n_u);
          cb.log_det = 0.0;
          continue;
        }
        const Eigen::MatrixXd cov = slice_square(fold.downdated.covariance(c), selected_);
        if (!plain_cholesky(cov, cb.chol)) {
          base.fast_ok = false;
          break;
        }
        cb.log_det = 2.0 * cb.chol.diagonal().array().log().sum();
        Eigen::MatrixXd centered =
            (slice_columns(fold.heldout, selected_).rowwise() -
             slice_vector(fold.downdated.mean(c), selected_).transpose())
                .transpose();
        cb.chol.triangularView<Eigen::Lower>().solveInPlace(centered);
        cb.q_base = centered.colwise().squaredNorm().transpose();
        cb.z_base = std::move(centered);
      }
    }
  }

  // Mean CV accuracy of selected + {candidate}; -inf when the candidate is
  // unusable (SingularCovariance after the jitter escalation).
  double score(int candidate) const {
    const int p = static_cast<int>(selected_.size());
    double total = 0.0;
    for (std::size_t u = 0; u < folds_->size(); ++u) {
      if (!bases_[u].fast_ok) return score_slow(candidate);
      const FoldContext& fold = (*folds_)[u];
      const int n_u = static_cast<int>(fold.heldout.rows());
      Eigen::MatrixXd q(n_u, num_classes_);
      for (int c = 0; c < num_classes_; ++c) {
        const ClassBase& cb = bases_[u].classes[c];
        const Eigen::MatrixXd& cov = fold.downdated.covariance(c);
        Eigen::VectorXd u_vec(p);
        for (int i = 0; i < p; ++i) u_vec[i] = cov(selected_[i], candidate);
        const Eigen::VectorXd w =
            p > 0 ? cb.chol.triangularView<Eigen::Lower>().solve(u_vec).eval()
                  : u_vec;
        const double alpha = cov(candidate, candidate) - w.squaredNorm();
        if (!(alpha > 0.0) || !std::isfinite(alpha)) return score_slow(candidate);
        Eigen::VectorXd dx = fold.heldout.col(candidate);
        dx.array() -= fold.downdated.mean(c)[candidate];
        Eigen::VectorXd ext;
        if (p > 0) {
          ext = (dx - cb.z_base.transpose() * w) / std::sqrt(alpha);
        } else {
          ext = dx / std::sqrt(alpha);
        }
        q.col(c) = (-(cb.q_base.array() + ext.array().square()) -
                    (cb.log_det + std::log(alpha)) + cb.two_ln_pi)
                       .matrix();
      }
      int hits = 0;
      for (int i = 0; i < n_u; ++i) {
        if (argmax_in_row(q, i) == fold.heldout_labels[i]) ++hits;
      }
      total += static_cast<double>(hits) / static_cast<double>(n_u);
    }
    return total / static_cast<double>(folds_->size());
  }

 private:
  double score_slow(int candidate) const {
    std::vector<int> features = selected_;
    features.push_back(candidate);
    double total = 0.0;
    for (const FoldContext& fold : *folds_) {
      try {
        total += fold_accuracy(fold, features);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::SingularCovariance) return kExcluded;
        throw;
      }
    }
    return total / static_cast<double>(folds_->size());
  }

  const std::vector<FoldContext>* folds_;
  int num_classes_ = 0;
  std::vector<int> selected_;
  std::vector<FoldBase> bases_;
};

// Leave-one-out iteration scorer. Non-member class scores come from the full
// model through the same factor-extension route plus the constant proportion
// shift; the member class is re-estimated with the leave-one-out rules and a
// fresh factorization per sample, as the closed-form route prescribes.
class LooScorer {
 public:
  LooScorer(const GmmModel& full, const Dataset& data)
      : full_(full),
        data_(data),
        shift_(2.0 * std::log(static_cast<double>(full.n_total()) /
                              static_cast<double>(full.n_total() - 1))) {}

  void begin_iteration(const std::vector<int>& selected) {
    selected_ = selected;
    const int p = static_cast<int>(selected.size());
    const int n = data_.n();
    fast_ok_ = true;
    bases_.assign(full_.num_classes(), ClassBase{});
    base_cov_.assign(full_.num_classes(), Eigen::MatrixXd());
    base_mean_.assign(full_.num_classes(), Eigen::VectorXd());
    for (int c = 0; c < full_.num_classes(); ++c) {
      ClassBase& cb = bases_[c];
      cb.two_ln_pi = 2.0 * std::log(full_.proportion(c));
      base_mean_[c] = slice_vector(full_.mean(c), selected_);
      if (p == 0) {
        base_cov_[c].resize(0, 0);
        cb.z_base.resize(0, n);
        cb.q_base = Eigen::VectorXd::Zero(n);
        cb.log_det = 0.0;
        continue;
      }
      base_cov_[c] = slice_square(full_.covariance(c), selected_);
      if (!fast_ok_) continue;
      if (!plain_cholesky(base_cov_[c], cb.chol)) {
        fast_ok_ = false;
        continue;
      }
      cb.log_det = 2.0 * cb.chol.diagonal().array().log().sum();
      Eigen::MatrixXd centered =
          (slice_columns(data_.samples, selected_).rowwise() -
           base_mean_[c].transpose())
              .transpose();
      cb.chol.triangularView<Eigen::Lower>().solveInPlace(centered);
      cb.q_base = centered.colwise().squaredNorm().transpose();
      cb.z_base = std::move(centered);
    }
  }

  double score(int candidate) const {
    if (!fast_ok_) return score_slow(candidate);
    const int p = static_cast<int>(selected_.size());
    const int n = data_.n();
    const int num_classes = full_.num_classes();

    // Candidate-specific extension per class, over the full model.
    std::vector<Eigen::VectorXd> u_vecs(num_classes);
    std::vector<Eigen::VectorXd> w(num_classes);
    Eigen::MatrixXd q_full(n, num_classes);
    std::vector<double> ln_alpha(num_classes);
    std::vector<double> alpha(num_classes);
    for (int c = 0; c < num_classes; ++c) {
      const ClassBase& cb = bases_[c];
      const Eigen::MatrixXd& cov = full_.covariance(c);
      Eigen::VectorXd u_vec(p);
      for (int i = 0; i < p; ++i) u_vec[i] = cov(selected_[i], candidate);
      w[c] = p > 0 ? cb.chol.triangularView<Eigen::Lower>().solve(u_vec).eval()
                   : u_vec;
      alpha[c] = cov(candidate, candidate) - w[c].squaredNorm();
      if (!(alpha[c] > 0.0) || !std::isfinite(alpha[c])) return score_slow(candidate);
      ln_alpha[c] = std::log(alpha[c]);
      Eigen::VectorXd dx = data_.samples.col(candidate);
      dx.array() -= full_.mean(c)[candidate];
      Eigen::VectorXd ext;
      if (p > 0) {
        ext = (dx - cb.z_base.transpose() * w[c]) / std::sqrt(alpha[c]);
      } else {
        ext = dx / std::sqrt(alpha[c]);
      }
      q_full.col(c) = (-(cb.q_base.array() + ext.array().square()) -
                       (cb.log_det + ln_alpha[c]) + cb.two_ln_pi)
                          .matrix();
      u_vecs[c] = std::move(u_vec);
    }

    const long n_total = full_.n_total();
    int hits = 0;
    Eigen::MatrixXd member_cov(p + 1, p + 1);
    Eigen::VectorXd scores(num_classes);
    for (int i = 0; i < n; ++i) {
      const int m = data_.labels[i];
      const long n_m = full_.class_count(m);
      const double a = static_cast<double>(n_m) / static_cast<double>(n_m - 1);
      const double b = static_cast<double>(n_m) /
                       (static_cast<double>(n_m - 1) * static_cast<double>(n_m - 1));

      // Leave-one-out covariance of the member class on selected + candidate.
      Eigen::VectorXd delta(p + 1);
      for (int t = 0; t < p; ++t) {
        delta[t] = data_.samples(i, selected_[t]) - full_.mean(m)[selected_[t]];
      }
      delta[p] = data_.samples(i, candidate) - full_.mean(m)[candidate];
      member_cov.topLeftCorner(p, p) = a * base_cov_[m];
      member_cov.topRightCorner(p, 1) = a * u_vecs[m];
      member_cov.bottomLeftCorner(1, p) = member_cov.topRightCorner(p, 1).transpose();
      member_cov(p, p) = a * full_.covariance(m)(candidate, candidate);
      member_cov -= b * (delta * delta.transpose());

      double member_q;
      try {
        const ClassFactor factor = factorize_covariance(member_cov);
        Eigen::VectorXd centered(p + 1);
        const double inv = 1.0 / static_cast<double>(n_m - 1);
        for (int t = 0; t < p; ++t) {
          const double mu = (static_cast<double>(n_m) * full_.mean(m)[selected_[t]] -
                             data_.samples(i, selected_[t])) * inv;
          centered[t] = data_.samples(i, selected_[t]) - mu;
        }
        const double mu_last = (static_cast<double>(n_m) * full_.mean(m)[candidate] -
                                data_.samples(i, candidate)) * inv;
        centered[p] = data_.samples(i, candidate) - mu_last;
        factor.chol_lower.triangularView<Eigen::Lower>().solveInPlace(centered);
        const double pi_member =
            (static_cast<double>(n_total) * full_.proportion(m) - 1.0) /
            static_cast<double>(n_total - 1);
        member_q = -centered.squaredNorm() - factor.log_det +
                   2.0 * std::log(pi_member);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::SingularCovariance) return kExcluded;
        throw;
      }

      for (int c = 0; c < num_classes; ++c) {
        scores[c] = c == m ? member_q : q_full(i, c) + shift_;
      }
      if (argmax_lowest(scores) == m) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(n);
  }

 private:
  // Composition of the public operations, used when the shared base factor
  // is not cleanly factorizable.
  double score_slow(int candidate) const {
    std::vector<int> features = selected_;
    features.push_back(candidate);
    int hits = 0;
    for (int i = 0; i < data_.n(); ++i) {
      try {
        const GmmModel downdated =
            loo_downdate(full_, data_.samples.row(i).transpose(), data_.labels[i]);
        const GmmModel sub = marginalize(downdated, features);
        Eigen::VectorXd x(features.size());
        for (std::size_t t = 0; t < features.size(); ++t) {
          x[t] = data_.samples(i, features[t]);
        }
        if (decision_scores(sub, x).predicted == data_.labels[i]) ++hits;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::SingularCovariance) return kExcluded;
        throw;
      }
    }
    return static_cast<double>(hits) / static_cast<double>(data_.n());
  }

  const GmmModel& full_;
  const Dataset& data_;
  double shift_;
  std::vector<int> selected_;
  std::vector<ClassBase> bases_;
  std::vector<Eigen::MatrixXd> base_cov_;
  std::vector<Eigen::VectorXd> base_mean_;
  bool fast_ok_ = true;
};

void validate_config(const Dataset& data, const SelectionConfig& config) {
  if (config.delta < 0.0) {
    raise(ErrorCode::SpecError, "delta must be nonnegative");
  }
  if (config.max_variables < 1 || config.max_variables > data.dim()) {
    raise(ErrorCode::SpecError,
          "max_variables must lie in [1, " + std::to_string(data.dim()) + "]");
  }
  if (config.threads < 0) {
    raise(ErrorCode::SpecError, "threads must be nonnegative");
  }
}

// Greedy acceptance loop shared by the k-fold and LOO paths. score_one must
// be safe to call concurrently for distinct candidates.
template <class BeginIteration, class ScoreOne>
SelectionState greedy_loop(const Dataset& data, const SelectionConfig& config,
                           BeginIteration&& begin_iteration, ScoreOne&& score_one) {
  SelectionState state;
  state.available.resize(data.dim());
  std::iota(state.available.begin(), state.available.end(), 0);

  double previous_best = 0.0;
  int iteration = 0;
  while (true) {
    if (static_cast<int>(state.selected.size()) >= config.max_variables) {
      state.stop_reason = StopReason::MaxVariablesReached;
      break;
    }
    if (state.available.empty()) {
      state.stop_reason = StopReason::PoolExhausted;
      break;
    }
    const auto iteration_start = Clock::now();
    begin_iteration(state.selected, iteration);

    std::vector<double> scores(state.available.size(), kExcluded);
    detail::parallel_for(
        static_cast<int>(state.available.size()), config.threads,
        [&](int j) { scores[j] = score_one(state.available[j]); });

    int best = -1;
    int skipped = 0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (scores[j] == kExcluded) {
        ++skipped;
        continue;
      }
      if (best < 0 || scores[j] > scores[best]) best = static_cast<int>(j);
    }
    if (best < 0) {
      if (iteration == 0) {
        raise(ErrorCode::NoFeasibleCandidate,
              "every candidate failed with SingularCovariance in the first "
              "iteration");
      }
      state.stop_reason = StopReason::DeltaNotMet;
      break;
    }
    if (scores[best] - previous_best < config.delta) {
      state.stop_reason = StopReason::DeltaNotMet;
      break;
    }

    const int feature = state.available[best];
    state.selected.push_back(feature);
    state.available.erase(state.available.begin() + best);
    state.trace.push_back(IterationRecord{feature, scores[best], skipped,
                                          seconds_since(iteration_start)});
    previous_best = scores[best];
    ++iteration;
  }
  return state;
}

}  // namespace

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::DeltaNotMet: return "DeltaNotMet";
    case StopReason::MaxVariablesReached: return "MaxVariablesReached";
    case StopReason::PoolExhausted: return "PoolExhausted";
  }
  return "Unknown";
}

CvScore score_candidate(const GmmModel& model, const Dataset& data,
                        const FoldPlan& plan, const std::vector<int>& features) {
  if (features.empty()) {
    raise(ErrorCode::EmptySelection, "no features to score");
  }
  if (model.dim() != data.dim()) {
    raise(ErrorCode::LengthMismatch, "model and dataset dimensions differ");
  }
  check_index_list(features, model.dim(), "feature");
  const std::vector<FoldContext> folds = build_fold_contexts(model, data, plan);

  CvScore score;
  score.fold_accuracies.reserve(folds.size());
  for (std::size_t u = 0; u < folds.size(); ++u) {
    try {
      score.fold_accuracies.push_back(fold_accuracy(folds[u], features));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SingularCovariance) {
        raise(ErrorCode::SingularCovariance,
              "fold " + std::to_string(u) + ": " + e.what());
      }
      throw;
    }
    score.mean_accuracy += score.fold_accuracies.back();
  }
  score.mean_accuracy /= static_cast<double>(folds.size());
  return score;
}

SelectionState forward_select(const Dataset& data, const SelectionConfig& config) {
  validate_config(data, config);
  if (config.leave_one_out()) return loo_forward_select(data, config);

  const auto total_start = Clock::now();
  const auto fit_start = Clock::now();
  const GmmModel full = fit_full_model(data);
  const double fit_seconds = seconds_since(fit_start);

  FoldPlan plan = plan_folds(data.labels, config.k, config.seed, config.stratified);
  std::vector<FoldContext> folds = build_fold_contexts(full, data, plan);
  KfoldScorer scorer(folds, data.num_classes());

  SelectionState state = greedy_loop(
      data, config,
      [&](const std::vector<int>& selected, int iteration) {
        if (config.refold_each_iteration && iteration > 0) {
          plan = plan_folds(data.labels, config.k, config.seed + iteration,
                            config.stratified);
          folds = build_fold_contexts(full, data, plan);
          scorer.rebind(folds);
        }
        scorer.begin_iteration(selected);
      },
      [&](int candidate) { return scorer.score(candidate); });

  state.fit_seconds = fit_seconds;
  state.total_seconds = seconds_since(total_start);
  return state;
}

SelectionState loo_forward_select(const Dataset& data,
                                  const SelectionConfig& config) {
  validate_config(data, config);
  for (int c = 0; c < data.num_classes(); ++c) {
    if (data.class_counts[c] < 3) {
      raise(ErrorCode::DegenerateRemainder,
            "leave-one-out needs at least 3 samples per class, class " +
                std::to_string(c) + " has " +
                std::to_string(data.class_counts[c]));
    }
  }

  const auto total_start = Clock::now();
  const auto fit_start = Clock::now();
  const GmmModel full = fit_full_model(data);
  const double fit_seconds = seconds_since(fit_start);

  LooScorer scorer(full, data);
  SelectionState state = greedy_loop(
      data, config,
      [&](const std::vector<int>& selected, int) { scorer.begin_iteration(selected); },
      [&](int candidate) { return scorer.score(candidate); });

  state.fit_seconds = fit_seconds;
  state.total_seconds = seconds_since(total_start);
  return state;
}

}  // namespace npfs
