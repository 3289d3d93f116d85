#include "inkscreen/learn/elastic_net.hpp"

#include <algorithm>
#include <cmath>

#include "inkscreen/error.hpp"

namespace inkscreen::learn {

namespace {

double log1pexp(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

double penalty(const Vector& w, const ElasticNetParams& params) {
  const double a = params.l1_ratio;
  return (a * w.lpNorm<1>() + 0.5 * (1.0 - a) * w.squaredNorm()) / params.C;
}

double coord_penalty(double v, double lambda, double alpha) {
  return lambda * (alpha * std::abs(v) + 0.5 * (1.0 - alpha) * v * v);
}

void check_inputs(GlmFlavor flavor, const Eigen::Ref<const Matrix>& X,
                  const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& s,
                  const ElasticNetParams& params) {
  if (!(params.l1_ratio >= 0.0 && params.l1_ratio <= 1.0)) {
    throw Error(ErrorCode::BadAlpha, "l1_ratio must lie in [0,1]");
  }
  if (!(params.C > 0.0) || !std::isfinite(params.C)) throw Error(ErrorCode::BadC, "C must be > 0");
  if (X.rows() != y.size() || s.size() != y.size()) {
    throw Error(ErrorCode::ShapeMismatch, "X, y and weights disagree on row count");
  }
  if (X.rows() == 0) throw Error(ErrorCode::NoRows, "no training rows");
  if (!X.allFinite() || !y.allFinite() || !s.allFinite()) {
    throw Error(ErrorCode::NonFinite, "non-finite training input");
  }
  if (flavor == GlmFlavor::Logistic) {
    for (Index i = 0; i < y.size(); ++i) {
      if (y(i) != 0.0 && y(i) != 1.0) throw Error(ErrorCode::ShapeMismatch, "logistic y must be 0/1");
    }
    if (y.minCoeff() == y.maxCoeff()) throw Error(ErrorCode::SingleClass, "logistic fit needs both classes");
  }
}

// Coordinate-descent state shared by both flavors.
class CoordinateSolver {
 public:
  CoordinateSolver(GlmFlavor flavor, const Eigen::Ref<const Matrix>& X,
                   const Eigen::Ref<const Vector>& y, Vector s, const ElasticNetParams& params)
      : flavor_(flavor), X_(X), y_(y), s_(std::move(s)), lambda_(1.0 / params.C),
        alpha_(params.l1_ratio), params_(params) {
    const Index p = X.cols();
    w_ = Vector::Zero(p);
    curvature_bound_ = (X.array().square().colwise() * s_.array()).colwise().sum().transpose();
    const double total = s_.sum();
    const double ybar = s_.dot(y) / total;
    if (flavor_ == GlmFlavor::Logistic) {
      b_ = std::log(ybar / (1.0 - ybar));
      curvature_bound_ *= 0.25;
    } else {
      b_ = ybar;
    }
    eta_ = Vector::Constant(X.rows(), b_);
    loss_ = data_loss(eta_);
  }

  double sweep(bool active_only) {
    double max_change = update_intercept();
    for (Index j = 0; j < w_.size(); ++j) {
      if (active_only && w_(j) == 0.0) continue;
      max_change = std::max(max_change, update_coordinate(j));
    }
    return max_change;
  }

  double objective() const { return loss_ + penalty(w_, params_); }
  LinearPredictor result(int sweeps) const { return LinearPredictor{w_, b_, sweeps}; }

 private:
  double data_loss(const Vector& eta) const {
    if (flavor_ == GlmFlavor::Linear) {
      return 0.5 * (s_.array() * (y_ - eta).array().square()).sum();
    }
    double total = 0.0;
    for (Index i = 0; i < eta.size(); ++i) total += s_(i) * (log1pexp(eta(i)) - y_(i) * eta(i));
    return total;
  }

  double shifted_loss(const Eigen::Ref<const Vector>& x, double delta) const {
    double total = 0.0;
    for (Index i = 0; i < eta_.size(); ++i) {
      const double e = eta_(i) + delta * x(i);
      total += flavor_ == GlmFlavor::Linear ? 0.5 * s_(i) * (y_(i) - e) * (y_(i) - e)
                                            : s_(i) * (log1pexp(e) - y_(i) * e);
    }
    return total;
  }

  void apply(const Eigen::Ref<const Vector>& x, double delta, double new_loss) {
    eta_ += delta * x;
    loss_ = new_loss;
  }

  double update_intercept() {
    const Vector ones = Vector::Ones(eta_.size());
    if (flavor_ == GlmFlavor::Linear) {
      const double delta = s_.dot(y_ - eta_) / s_.sum();
      if (delta == 0.0) return 0.0;
      b_ += delta;
      apply(ones, delta, shifted_loss(ones, delta));
      return std::abs(delta);
    }
    double g = 0.0, h = 0.0;
    for (Index i = 0; i < eta_.size(); ++i) {
      const double p = sigmoid(eta_(i));
      g += s_(i) * (p - y_(i));
      h += s_(i) * p * (1.0 - p);
    }
    if (g == 0.0) return 0.0;
    double delta = h > 0.0 ? -g / h : 0.0;
    double candidate = shifted_loss(ones, delta);
    if (!(h > 0.0) || !(candidate <= loss_)) {
      delta = -g / (0.25 * s_.sum());
      candidate = shifted_loss(ones, delta);
    }
    b_ += delta;
    apply(ones, delta, candidate);
    return std::abs(delta);
  }

  double update_coordinate(Index j) {
    const auto x = X_.col(j);
    const double wj = w_(j);
    const double ridge = lambda_ * (1.0 - alpha_);
    const double l1 = lambda_ * alpha_;
    double next = wj;
    double next_loss = loss_;

    if (flavor_ == GlmFlavor::Linear) {
      const double denom = curvature_bound_(j) + ridge;
      if (denom == 0.0) return 0.0;
      const double rho = (s_.array() * x.array() * (y_ - eta_).array()).sum() + curvature_bound_(j) * wj;
      next = soft_threshold(rho, l1) / denom;
      if (next == wj) return 0.0;
      next_loss = shifted_loss(x, next - wj);
    } else {
      double g = 0.0, h = 0.0;
      for (Index i = 0; i < eta_.size(); ++i) {
        const double p = sigmoid(eta_(i));
        g += s_(i) * (p - y_(i)) * x(i);
        h += s_(i) * p * (1.0 - p) * x(i) * x(i);
      }
      const double current = loss_ + coord_penalty(wj, lambda_, alpha_);
      bool accepted = false;
      if (h + ridge > 0.0) {
        next = soft_threshold(h * wj - g, l1) / (h + ridge);
        if (next == wj) return 0.0;
        next_loss = shifted_loss(x, next - wj);
        accepted = next_loss + coord_penalty(next, lambda_, alpha_) <= current;
      }
      if (!accepted) {
        // Quadratic majorizer with the global curvature bound 1/4.
        const double H = curvature_bound_(j);
        if (H + ridge == 0.0) return 0.0;
        next = soft_threshold(H * wj - g, l1) / (H + ridge);
        if (next == wj) return 0.0;
        next_loss = shifted_loss(x, next - wj);
      }
    }
    w_(j) = next;
    apply(x, next - wj, next_loss);
    return std::abs(next - wj);
  }

  GlmFlavor flavor_;
  Eigen::Ref<const Matrix> X_;
  Eigen::Ref<const Vector> y_;
  Vector s_;
  double lambda_;
  double alpha_;
  ElasticNetParams params_;
  Vector w_;
  double b_ = 0.0;
  Vector curvature_bound_;
  Vector eta_;
  double loss_ = 0.0;
};

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double glm_objective(GlmFlavor flavor, const LinearPredictor& model,
                     const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                     const Eigen::Ref<const Vector>& sample_weights, const ElasticNetParams& params) {
  const Vector s = normalized_weights(sample_weights);
  const Vector eta = model.eta(X);
  double loss = 0.0;
  for (Index i = 0; i < eta.size(); ++i) {
    loss += flavor == GlmFlavor::Linear ? 0.5 * s(i) * (y(i) - eta(i)) * (y(i) - eta(i))
                                        : s(i) * (log1pexp(eta(i)) - y(i) * eta(i));
  }
  return loss + penalty(model.weights, params);
}

LinearPredictor fit_glm(GlmFlavor flavor, const Eigen::Ref<const Matrix>& X,
                        const Eigen::Ref<const Vector>& y,
                        const Eigen::Ref<const Vector>& sample_weights,
                        const ElasticNetParams& params, const ElasticNetOptions& options) {
  check_inputs(flavor, X, y, sample_weights, params);
  CoordinateSolver solver(flavor, X, y, normalized_weights(sample_weights), params);

  int sweeps = 0;
  const auto step = [&](bool active_only) {
    const double change = solver.sweep(active_only);
    ++sweeps;
    if (options.on_sweep) options.on_sweep(sweeps, solver.objective());
    return change;
  };
  while (sweeps < options.max_sweeps) {
    if (step(false) < options.tol) break;
    while (sweeps < options.max_sweeps) {
      if (step(true) < options.tol) break;
    }
  }
  return solver.result(sweeps);
}

ElasticNetGLM fit_elastic_net(GlmFlavor flavor, const Eigen::Ref<const Matrix>& X,
                              const Eigen::Ref<const Vector>& y, int n_classes,
                              const ElasticNetParams& params,
                              const Eigen::Ref<const Vector>& sample_weights,
                              const ElasticNetOptions& options) {
  ElasticNetGLM model;
  model.flavor = flavor;
  model.params = params;
  if (flavor == GlmFlavor::Linear) {
    model.predictors.push_back(fit_glm(flavor, X, y, sample_weights, params, options));
    return model;
  }
  if (n_classes < 2) throw Error(ErrorCode::SingleClass, "classification needs two classes");
  model.n_classes = n_classes;
  if (n_classes == 2) {
    model.predictors.push_back(fit_glm(flavor, X, y, sample_weights, params, options));
    return model;
  }
  for (int k = 0; k < n_classes; ++k) {
    const Vector target = (y.array() == static_cast<double>(k)).cast<double>();
    model.predictors.push_back(fit_glm(flavor, X, target, sample_weights, params, options));
  }
  return model;
}

Matrix glm_predict(const ElasticNetGLM& model, const Eigen::Ref<const Matrix>& X) {
  for (const auto& p : model.predictors) {
    if (p.weights.size() != X.cols()) throw Error(ErrorCode::ShapeMismatch, "feature count differs from fit");
  }
  if (model.flavor == GlmFlavor::Linear) return model.predictors.front().eta(X);
  Matrix probs(X.rows(), model.n_classes);
  if (model.n_classes == 2) {
    const Vector eta = model.predictors.front().eta(X);
    for (Index i = 0; i < X.rows(); ++i) {
      probs(i, 1) = sigmoid(eta(i));
      probs(i, 0) = 1.0 - probs(i, 1);
    }
    return probs;
  }
  for (int k = 0; k < model.n_classes; ++k) {
    const Vector eta = model.predictors[static_cast<std::size_t>(k)].eta(X);
    for (Index i = 0; i < X.rows(); ++i) probs(i, k) = sigmoid(eta(i));
  }
  for (Index i = 0; i < X.rows(); ++i) probs.row(i) /= probs.row(i).sum();
  return probs;
}

}  // namespace inkscreen::learn
