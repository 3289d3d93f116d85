#include "inkscreen/learn/svm.hpp"

#include <cmath>
#include <limits>

#include "inkscreen/error.hpp"

namespace inkscreen::learn {

namespace {

constexpr double kTau = 1e-12;

Matrix gram(const SvmParams& params, const Eigen::Ref<const Matrix>& X) {
  const Index n = X.rows();
  Matrix K(n, n);
  if (params.kernel == Kernel::Linear) {
    K = X * X.transpose();
    return K;
  }
  const Vector sq = X.rowwise().squaredNorm();
  for (Index i = 0; i < n; ++i) {
    K(i, i) = 1.0;
    for (Index j = 0; j < i; ++j) {
      const double d2 = std::max(0.0, sq(i) + sq(j) - 2.0 * X.row(i).dot(X.row(j)));
      K(i, j) = K(j, i) = std::exp(-params.gamma * d2);
    }
  }
  return K;
}

void check_params(const SvmParams& params) {
  if (!(params.C > 0.0) || !std::isfinite(params.C)) throw Error(ErrorCode::BadC, "C must be > 0");
  if (params.kernel == Kernel::Rbf && (!(params.gamma > 0.0) || !std::isfinite(params.gamma))) {
    throw Error(ErrorCode::BadGamma, "gamma must be > 0");
  }
}

// min 1/2 a'Qa + p'a  s.t.  y'a = 0, 0 <= a_i <= U_i, with Q_ij = y_i y_j K(m_i, m_j).
struct DualProblem {
  const Matrix* K = nullptr;
  std::vector<Index> map;
  Vector y, p, U;
};

struct DualSolution {
  Vector alpha;
  double rho = 0.0;
  double max_violation = 0.0;
  long iterations = 0;
};

DualSolution solve_dual(const DualProblem& prob, const SvmOptions& options) {
  const Index l = prob.y.size();
  const Matrix& K = *prob.K;
  const auto q = [&](Index i, Index j) { return prob.y(i) * prob.y(j) * K(prob.map[i], prob.map[j]); };
  Vector alpha = Vector::Zero(l);
  Vector G = prob.p;
  Vector QD(l);
  for (Index i = 0; i < l; ++i) QD(i) = K(prob.map[i], prob.map[i]);

  const auto upper = [&](Index t) { return alpha(t) >= prob.U(t); };
  const auto lower = [&](Index t) { return alpha(t) <= 0.0; };

  const long max_iter = std::max<long>(options.max_passes * static_cast<long>(l), 1000);
  DualSolution sol;
  long iter = 0;
  double violation = 0.0;
  for (; iter < max_iter; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    Index i = -1;
    for (Index t = 0; t < l; ++t) {
      if (prob.y(t) > 0 ? !upper(t) : !lower(t)) {
        const double v = -prob.y(t) * G(t);
        if (v >= gmax) {
          gmax = v;
          i = t;
        }
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    Index j = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Index t = 0; t < l; ++t) {
      if (prob.y(t) > 0 ? lower(t) : upper(t)) continue;
      const double v = prob.y(t) * G(t);
      gmax2 = std::max(gmax2, v);
      if (i < 0) continue;
      const double grad_diff = gmax + v;
      if (grad_diff > 0.0) {
        double quad = QD(i) + QD(t) - 2.0 * prob.y(i) * prob.y(t) * q(i, t);
        if (quad <= 0.0) quad = kTau;
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj <= best) {
          best = obj;
          j = t;
        }
      }
    }
    violation = gmax + gmax2;
    if (i < 0 || j < 0 || violation < options.tol) break;

    const double Ci = prob.U(i), Cj = prob.U(j);
    const double old_i = alpha(i), old_j = alpha(j);
    const double qij = q(i, j);
    if (prob.y(i) != prob.y(j)) {
      double quad = QD(i) + QD(j) + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G(i) - G(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0) {
        if (alpha(j) < 0) {
          alpha(j) = 0;
          alpha(i) = diff;
        }
      } else if (alpha(i) < 0) {
        alpha(i) = 0;
        alpha(j) = -diff;
      }
      if (diff > Ci - Cj) {
        if (alpha(i) > Ci) {
          alpha(i) = Ci;
          alpha(j) = Ci - diff;
        }
      } else if (alpha(j) > Cj) {
        alpha(j) = Cj;
        alpha(i) = Cj + diff;
      }
    } else {
      double quad = QD(i) + QD(j) - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G(i) - G(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > Ci) {
        if (alpha(i) > Ci) {
          alpha(i) = Ci;
          alpha(j) = sum - Ci;
        }
      } else if (alpha(j) < 0) {
        alpha(j) = 0;
        alpha(i) = sum;
      }
      if (sum > Cj) {
        if (alpha(j) > Cj) {
          alpha(j) = Cj;
          alpha(i) = sum - Cj;
        }
      } else if (alpha(i) < 0) {
        alpha(i) = 0;
        alpha(j) = sum;
      }
    }
    const double di = alpha(i) - old_i, dj = alpha(j) - old_j;
    for (Index t = 0; t < l; ++t) G(t) += q(i, t) * di + q(j, t) * dj;
  }

  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  long n_free = 0;
  for (Index t = 0; t < l; ++t) {
    const double yg = prob.y(t) * G(t);
    if (upper(t)) {
      if (prob.y(t) < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (prob.y(t) > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  sol.rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
  sol.alpha = std::move(alpha);
  sol.max_violation = violation;
  sol.iterations = iter;
  return sol;
}

SvmMachine collect_machine(const Eigen::Ref<const Matrix>& X, const Vector& coef, double rho) {
  std::vector<Index> keep;
  for (Index i = 0; i < coef.size(); ++i) {
    if (coef(i) != 0.0) keep.push_back(i);
  }
  SvmMachine m;
  m.support_vectors = select_rows(X, keep);
  m.coef = select_entries(coef, keep);
  m.rho = rho;
  return m;
}

}  // namespace

std::string_view kernel_name(Kernel k) { return k == Kernel::Linear ? "linear" : "rbf"; }

double kernel_value(const SvmParams& params, const Eigen::Ref<const Eigen::RowVectorXd>& u,
                    const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  if (params.kernel == Kernel::Linear) return u.dot(v);
  return std::exp(-params.gamma * (u - v).squaredNorm());
}

SvmDual fit_svm_dual(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                     const SvmParams& params, const Eigen::Ref<const Vector>& sample_weights,
                     const SvmOptions& options) {
  check_params(params);
  if (X.rows() != y.size() || sample_weights.size() != y.size()) {
    throw Error(ErrorCode::ShapeMismatch, "X, y and weights disagree on row count");
  }
  if (!X.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite training input");
  bool pos = false, neg = false;
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) == 1.0) pos = true;
    else if (y(i) == -1.0) neg = true;
    else throw Error(ErrorCode::ShapeMismatch, "binary SVM labels must be +1/-1");
  }
  if (!pos || !neg) throw Error(ErrorCode::SingleClass, "SVM needs both classes");

  const Matrix K = gram(params, X);
  DualProblem prob;
  prob.K = &K;
  prob.map.resize(static_cast<std::size_t>(y.size()));
  for (Index i = 0; i < y.size(); ++i) prob.map[static_cast<std::size_t>(i)] = i;
  prob.y = y;
  prob.p = Vector::Constant(y.size(), -1.0);
  prob.U = params.C * normalized_weights(sample_weights);
  const DualSolution sol = solve_dual(prob, options);

  SvmDual out;
  out.alpha = sol.alpha;
  out.upper_bound = prob.U;
  out.labels = y;
  out.max_violation = sol.max_violation;
  out.iterations = sol.iterations;
  out.machine = collect_machine(X, (sol.alpha.array() * y.array()).matrix(), sol.rho);
  return out;
}

SvmMachine fit_svr(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                   const SvmParams& params, const SvmOptions& options) {
  check_params(params);
  if (X.rows() != y.size()) throw Error(ErrorCode::ShapeMismatch, "X and y disagree on row count");
  if (!X.allFinite() || !y.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite training input");
  const Index n = X.rows();
  const Matrix K = gram(params, X);
  DualProblem prob;
  prob.K = &K;
  prob.map.resize(static_cast<std::size_t>(2 * n));
  prob.y.resize(2 * n);
  prob.p.resize(2 * n);
  for (Index i = 0; i < n; ++i) {
    prob.map[static_cast<std::size_t>(i)] = i;
    prob.map[static_cast<std::size_t>(i + n)] = i;
    prob.y(i) = 1.0;
    prob.y(i + n) = -1.0;
    prob.p(i) = params.epsilon - y(i);
    prob.p(i + n) = params.epsilon + y(i);
  }
  prob.U = Vector::Constant(2 * n, params.C);
  const DualSolution sol = solve_dual(prob, options);
  const Vector coef = sol.alpha.head(n) - sol.alpha.tail(n);
  return collect_machine(X, coef, sol.rho);
}

Vector svm_decision(const SvmMachine& machine, const SvmParams& params,
                    const Eigen::Ref<const Matrix>& X) {
  Vector f = Vector::Constant(X.rows(), -machine.rho);
  if (machine.coef.size() == 0) return f;
  if (params.kernel == Kernel::Linear) {
    const Vector w = machine.support_vectors.transpose() * machine.coef;
    return (X * w).array() - machine.rho;
  }
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index s = 0; s < machine.coef.size(); ++s) {
      f(i) += machine.coef(s) * kernel_value(params, machine.support_vectors.row(s), X.row(i));
    }
  }
  return f;
}

SVMModel fit_svm(Task task, const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                 int n_classes, const SvmParams& params,
                 const Eigen::Ref<const Vector>& sample_weights, const SvmOptions& options) {
  SVMModel model;
  model.task = task;
  model.params = params;
  model.n_features = X.cols();
  if (task == Task::Regression) {
    model.machines.push_back(fit_svr(X, y, params, options));
    return model;
  }
  if (n_classes < 2) throw Error(ErrorCode::SingleClass, "SVM needs two classes");
  model.n_classes = n_classes;
  const auto one_vs_rest = [&](int k) {
    const Vector signs = (y.array() == static_cast<double>(k)).select(Vector::Ones(y.size()),
                                                                        -Vector::Ones(y.size()));
    return fit_svm_dual(X, signs, params, sample_weights, options).machine;
  };
  if (n_classes == 2) {
    model.machines.push_back(one_vs_rest(1));
  } else {
    for (int k = 0; k < n_classes; ++k) model.machines.push_back(one_vs_rest(k));
  }
  return model;
}

Matrix svm_scores(const SVMModel& model, const Eigen::Ref<const Matrix>& X) {
  if (X.cols() != model.n_features) throw Error(ErrorCode::ShapeMismatch, "feature count differs from fit");
  if (model.task == Task::Regression) return svm_decision(model.machines.front(), model.params, X);
  Matrix scores(X.rows(), model.n_classes);
  if (model.n_classes == 2) {
    const Vector f = svm_decision(model.machines.front(), model.params, X);
    scores.col(0) = -f;
    scores.col(1) = f;
    return scores;
  }
  for (int k = 0; k < model.n_classes; ++k) {
    scores.col(k) = svm_decision(model.machines[static_cast<std::size_t>(k)], model.params, X);
  }
  return scores;
}

}  // namespace inkscreen::learn
