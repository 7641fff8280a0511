#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "dgr/dataset.hpp"

namespace dgr {

struct SvmParams {
  double C = 1.0;
  double tol = 1e-4;
  int max_epochs = 1000;
  std::uint64_t seed = 42;

  void validate() const;
};

/// Linear SVM. Row k of `weights` with `bias(k)` is one binary separator.
///
/// Two classes: a single separator whose positive side is the higher class
/// (classes[1]). More classes: one-vs-rest, row k positive for classes[k].
struct SvmModel {
  std::vector<int> classes;  // ascending
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;

  Eigen::Index dim() const { return weights.cols(); }
};

/// Gaussian Naive Bayes. Row k of mean/variance belongs to classes[k].
struct NbModel {
  static constexpr double kVarianceFloor = 1e-6;

  std::vector<int> classes;
  Eigen::VectorXd log_prior;
  Eigen::MatrixXd mean;
  Eigen::MatrixXd variance;

  Eigen::Index dim() const { return mean.cols(); }
};

using Model = std::variant<SvmModel, NbModel>;

/// Per-epoch diagnostics of the dual coordinate descent solver.
struct SvmTrainingLog {
  /// primal[k][e]: regularized hinge objective of separator k after epoch e.
  std::vector<std::vector<double>> primal;
  /// dual[k][e]: the dual objective 1/2 |w(alpha)|^2 - sum(alpha) being
  /// minimized. Coordinate steps are exact, so it never increases; at the
  /// optimum it equals -primal.
  std::vector<std::vector<double>> dual;
  std::vector<int> epochs;
  std::vector<bool> converged;
};

/// L2-regularized hinge-loss SVM by dual coordinate descent. The bias is an
/// extra constant-1 feature, so the objective regularizes it together with w:
///   1/2 (|w|^2 + b^2) + C sum_i max(0, 1 - y_i (w.x_i + b)).
/// Each epoch visits the samples in a seeded random order; training stops once
/// the projected-gradient spread drops below tol or after max_epochs.
SvmModel train_svm(const Dataset& train, const SvmParams& params = {},
                   SvmTrainingLog* log = nullptr);

/// Primal objective above for one separator with labels y in {-1, +1}.
double svm_objective(const Eigen::Ref<const Eigen::VectorXd>& w, double b,
                     const Eigen::Ref<const FeatureMatrix>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y, double C);

/// Scores aligned with model.classes. Binary models give (-m, +m) where
/// m = w.x + b; one-vs-rest models give each separator's margin.
Eigen::VectorXd svm_decision(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Joint log-likelihoods log P(c) + sum_j log N(x_j; mean, variance).
Eigen::VectorXd nb_log_scores(const NbModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Class posteriors (softmax of nb_log_scores).
Eigen::VectorXd nb_posterior(const NbModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Index of the largest score; ties go to the lowest index.
Eigen::Index argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& scores);

int svm_predict(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

NbModel train_nb(const Dataset& train);
int nb_predict(const NbModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Dispatch over the model variant.
Eigen::VectorXd decision_scores(const Model& model, const Eigen::Ref<const Eigen::VectorXd>& x);
int predict(const Model& model, const Eigen::Ref<const Eigen::VectorXd>& x);
const std::vector<int>& model_classes(const Model& model);
Eigen::Index model_dim(const Model& model);
std::string algorithm_tag(const Model& model);

/// Fraction of correctly predicted samples. Throws EmptyTestSetError on an
/// empty set.
double evaluate(const Model& model, const Dataset& test);

}  // namespace dgr
