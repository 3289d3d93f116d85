#include "inkscreen/learn/preprocess.hpp"

#include <cmath>
#include <vector>

#include "inkscreen/error.hpp"
#include "inkscreen/stats.hpp"

namespace inkscreen::learn {

Preprocessor fit_preprocessor(const Eigen::Ref<const Matrix>& X) {
  if (X.rows() < 2) throw Error(ErrorCode::NoRows, "preprocessor needs at least two rows");
  const Index p = X.cols();
  Preprocessor pp;
  pp.median = Vector::Zero(p);
  pp.mean = Vector::Zero(p);
  pp.scale = Vector::Ones(p);
  for (Index j = 0; j < p; ++j) {
    std::vector<double> present;
    present.reserve(static_cast<std::size_t>(X.rows()));
    for (Index i = 0; i < X.rows(); ++i) {
      if (!std::isnan(X(i, j))) present.push_back(X(i, j));
    }
    // A column with no observed values imputes to zero and becomes constant.
    pp.median(j) = stats::median(present).value_or(0.0);

    Vector col = X.col(j);
    for (Index i = 0; i < col.size(); ++i) {
      if (std::isnan(col(i))) col(i) = pp.median(j);
    }
    if (!col.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite training value");
    if (col.minCoeff() == col.maxCoeff()) {
      pp.mean(j) = col(0);
      continue;
    }
    pp.mean(j) = col.mean();
    const double sd = std::sqrt((col.array() - pp.mean(j)).square().mean());
    pp.scale(j) = sd < 1e-12 ? 1.0 : sd;
  }
  return pp;
}

Matrix apply_preprocessor(const Preprocessor& pp, const Eigen::Ref<const Matrix>& X) {
  if (X.cols() != pp.n_features()) {
    throw Error(ErrorCode::ShapeMismatch, "preprocessor fitted on a different feature count");
  }
  Matrix out(X.rows(), X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    for (Index i = 0; i < X.rows(); ++i) {
      const double v = std::isnan(X(i, j)) ? pp.median(j) : X(i, j);
      out(i, j) = (v - pp.mean(j)) / pp.scale(j);
    }
  }
  return out;
}

}  // namespace inkscreen::learn
