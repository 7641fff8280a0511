#include "dgr/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "dgr/errors.hpp"

namespace dgr {

namespace {

std::vector<int> distinct_labels(const Dataset& ds) {
  std::vector<int> classes(ds.labels);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2) throw SingleClassError("training data needs at least two distinct labels");
  return classes;
}

void check_dim(Eigen::Index expected, Eigen::Index got) {
  if (expected != got) {
    throw DimensionMismatchError("feature dimension " + std::to_string(got) + ", model expects " +
                                 std::to_string(expected));
  }
}

struct BinarySolution {
  Eigen::VectorXd w;  // augmented: last entry is the bias
  int epochs = 0;
  bool converged = false;
  std::vector<double> primal;
  std::vector<double> dual;
};

BinarySolution solve_binary(const FeatureMatrix& x, const Eigen::VectorXd& y, const SvmParams& params,
                            std::uint64_t seed, bool record) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const double C = params.C;

  // Squared norms of the augmented samples [x_i, 1].
  const Eigen::VectorXd q = x.rowwise().squaredNorm().array() + 1.0;

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);

  BinarySolution sol;
  for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (const Eigen::Index i : order) {
      const double margin = x.row(i).dot(w.head(d)) + w(d);
      const double g = y(i) * margin - 1.0;
      double pg = g;
      if (alpha(i) == 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha(i) == C) {
        pg = std::max(g, 0.0);
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (pg == 0.0) continue;
      const double old = alpha(i);
      alpha(i) = std::clamp(old - g / q(i), 0.0, C);
      const double step = (alpha(i) - old) * y(i);
      w.head(d) += step * x.row(i).transpose();
      w(d) += step;
    }
    sol.epochs = epoch + 1;
    if (record) {
      sol.primal.push_back(svm_objective(w.head(d), w(d), x, y, C));
      sol.dual.push_back(0.5 * w.squaredNorm() - alpha.sum());
    }
    if (pg_max - pg_min < params.tol) {
      sol.converged = true;
      break;
    }
  }

  // Rebuild w from the dual variables so symmetric solutions cancel exactly.
  sol.w = Eigen::VectorXd::Zero(d + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (alpha(i) == 0.0) continue;
    const double coef = alpha(i) * y(i);
    sol.w.head(d) += coef * x.row(i).transpose();
    sol.w(d) += coef;
  }
  return sol;
}

}  // namespace

void SvmParams::validate() const {
  if (!(C > 0.0) || !(tol > 0.0) || max_epochs < 1) {
    throw InvalidArgument("svm params require C > 0, tol > 0, max_epochs >= 1");
  }
}

double svm_objective(const Eigen::Ref<const Eigen::VectorXd>& w, double b,
                     const Eigen::Ref<const FeatureMatrix>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y, double C) {
  const Eigen::ArrayXd margins = y.array() * ((x * w).array() + b);
  return 0.5 * (w.squaredNorm() + b * b) + C * (1.0 - margins).max(0.0).sum();
}

SvmModel train_svm(const Dataset& train, const SvmParams& params, SvmTrainingLog* log) {
  params.validate();
  if (static_cast<std::size_t>(train.features.rows()) != train.labels.size()) {
    throw DimensionMismatchError("feature rows and labels differ in length");
  }
  SvmModel model;
  model.classes = distinct_labels(train);
  const std::size_t problems = model.classes.size() == 2 ? 1 : model.classes.size();
  model.weights.resize(static_cast<Eigen::Index>(problems), train.dim());
  model.bias.resize(static_cast<Eigen::Index>(problems));
  if (log) *log = {};

  for (std::size_t k = 0; k < problems; ++k) {
    const int positive = problems == 1 ? model.classes[1] : model.classes[k];
    Eigen::VectorXd y(static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      y(static_cast<Eigen::Index>(i)) = train.labels[i] == positive ? 1.0 : -1.0;
    }
    const auto sol = solve_binary(train.features, y, params, params.seed + k, log != nullptr);
    model.weights.row(static_cast<Eigen::Index>(k)) = sol.w.head(train.dim()).transpose();
    model.bias(static_cast<Eigen::Index>(k)) = sol.w(train.dim());
    if (log) {
      log->primal.push_back(sol.primal);
      log->dual.push_back(sol.dual);
      log->epochs.push_back(sol.epochs);
      log->converged.push_back(sol.converged);
    }
  }
  return model;
}

Eigen::VectorXd svm_decision(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_dim(model.dim(), x.size());
  const Eigen::VectorXd margins = model.weights * x + model.bias;
  if (model.classes.size() == 2) return Eigen::Vector2d(-margins(0), margins(0));
  return margins;
}

Eigen::Index argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& scores) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < scores.size(); ++k) {
    if (scores(k) > scores(best)) best = k;
  }
  return best;
}

int svm_predict(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return model.classes[static_cast<std::size_t>(argmax_lowest(svm_decision(model, x)))];
}

NbModel train_nb(const Dataset& train) {
  NbModel model;
  model.classes = distinct_labels(train);
  const auto k = static_cast<Eigen::Index>(model.classes.size());
  const Eigen::Index d = train.dim();
  model.log_prior.resize(k);
  model.mean = Eigen::MatrixXd::Zero(k, d);
  model.variance = Eigen::MatrixXd::Zero(k, d);

  for (Eigen::Index c = 0; c < k; ++c) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (train.labels[i] == model.classes[static_cast<std::size_t>(c)]) rows.push_back(i);
    }
    const auto count = static_cast<double>(rows.size());
    model.log_prior(c) = std::log(count / static_cast<double>(train.size()));
    for (const auto i : rows) model.mean.row(c) += train.features.row(static_cast<Eigen::Index>(i));
    model.mean.row(c) /= count;
    for (const auto i : rows) {
      model.variance.row(c) +=
          (train.features.row(static_cast<Eigen::Index>(i)) - model.mean.row(c)).array().square().matrix();
    }
    model.variance.row(c) /= count;
  }
  model.variance = model.variance.cwiseMax(NbModel::kVarianceFloor);
  return model;
}

Eigen::VectorXd nb_log_scores(const NbModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_dim(model.dim(), x.size());
  const auto k = static_cast<Eigen::Index>(model.classes.size());
  Eigen::VectorXd scores(k);
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto var = model.variance.row(c).transpose().array();
    const auto diff = x.array() - model.mean.row(c).transpose().array();
    scores(c) = model.log_prior(c) - 0.5 * ((log_two_pi + var.log()) + diff.square() / var).sum();
  }
  return scores;
}

Eigen::VectorXd nb_posterior(const NbModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd scores = nb_log_scores(model, x);
  const Eigen::ArrayXd e = (scores.array() - scores.maxCoeff()).exp();
  return (e / e.sum()).matrix();
}

int nb_predict(const NbModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return model.classes[static_cast<std::size_t>(argmax_lowest(nb_log_scores(model, x)))];
}

Eigen::VectorXd decision_scores(const Model& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::visit(
      [&](const auto& m) -> Eigen::VectorXd {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, SvmModel>) {
          return svm_decision(m, x);
        } else {
          return nb_log_scores(m, x);
        }
      },
      model);
}

int predict(const Model& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const auto& classes = model_classes(model);
  return classes[static_cast<std::size_t>(argmax_lowest(decision_scores(model, x)))];
}

const std::vector<int>& model_classes(const Model& model) {
  return std::visit([](const auto& m) -> const std::vector<int>& { return m.classes; }, model);
}

Eigen::Index model_dim(const Model& model) {
  return std::visit([](const auto& m) { return m.dim(); }, model);
}

std::string algorithm_tag(const Model& model) {
  return std::holds_alternative<SvmModel>(model) ? "svm-linear" : "gaussian-nb";
}

double evaluate(const Model& model, const Dataset& test) {
  if (test.size() == 0) throw EmptyTestSetError("cannot evaluate on an empty test set");
  check_dim(model_dim(model), test.dim());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const Eigen::VectorXd x = test.features.row(static_cast<Eigen::Index>(i)).transpose();
    if (predict(model, x) == test.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace dgr
