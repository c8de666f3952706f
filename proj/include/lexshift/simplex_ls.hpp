#pragma once

// Least squares over the probability simplex:
//
//   minimize ||y - X w||^2   subject to   w >= 0,  sum(w) = 1
//
// solved with a primal active-set method in the style of Lawson-Hanson NNLS.
// Each subproblem is the equality-constrained least squares problem on the
// current support, reduced to an unconstrained one by expressing the weights
// relative to a reference column and solved with a rank-revealing
// decomposition, so collinear or surplus donors are tolerated.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "lexshift/common.hpp"

namespace lexshift {

struct SimplexFit {
  Eigen::VectorXd weights;
  double objective = 0.0;  // ||y - X w||^2
  int iterations = 0;
  bool converged = true;
};

namespace detail {

// argmin over z with sum(z) = 1 of ||y - X_S z||^2 for support S.
inline Eigen::VectorXd affine_least_squares(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                                            const std::vector<Eigen::Index>& support) {
  const auto k = static_cast<Eigen::Index>(support.size());
  Eigen::VectorXd z(k);
  if (k == 1) {
    z(0) = 1.0;
    return z;
  }
  const Eigen::VectorXd ref = X.col(support[0]);
  Eigen::MatrixXd B(X.rows(), k - 1);
  for (Eigen::Index i = 1; i < k; ++i) B.col(i - 1) = X.col(support[static_cast<std::size_t>(i)]) - ref;
  Eigen::VectorXd u = B.completeOrthogonalDecomposition().solve(y - ref);
  z(0) = 1.0 - u.sum();
  z.tail(k - 1) = u;
  return z;
}

}  // namespace detail

/// Fits simplex weights of donor columns `X` (months x donors) to `y`.
[[nodiscard]] inline SimplexFit fit_weights(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) throw InvalidInput("fit_weights: treated series and donor matrix differ in length");
  if (n < 2) throw InvalidInput("fit_weights: need at least 2 pre-treatment months");
  if (p < 1) throw InvalidInput("fit_weights: need at least one donor");
  if (!y.allFinite() || !X.allFinite()) throw InvalidInput("fit_weights: non-finite input");

  SimplexFit fit;
  fit.weights = Eigen::VectorXd::Zero(p);

  Eigen::Index start = 0;
  double best = (X.col(0) - y).squaredNorm();
  for (Eigen::Index j = 1; j < p; ++j) {
    double d = (X.col(j) - y).squaredNorm();
    if (d < best) {
      best = d;
      start = j;
    }
  }
  fit.weights(start) = 1.0;

  const double tol = 1e-12 * static_cast<double>(n) * (1.0 + X.cwiseAbs().maxCoeff()) * (1.0 + y.cwiseAbs().maxCoeff());
  std::vector<bool> in_support(static_cast<std::size_t>(p), false);
  std::vector<bool> blocked(static_cast<std::size_t>(p), false);
  in_support[static_cast<std::size_t>(start)] = true;
  const int max_iterations = 20 * static_cast<int>(p + n) + 200;

  auto support_list = [&] {
    std::vector<Eigen::Index> s;
    for (Eigen::Index j = 0; j < p; ++j)
      if (in_support[static_cast<std::size_t>(j)]) s.push_back(j);
    return s;
  };

  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    // Gradient of 0.5 ||y - Xw||^2; on the support it equals -nu for the
    // multiplier nu of sum(w) = 1.
    Eigen::VectorXd grad = X.transpose() * (X * fit.weights - y);
    auto support = support_list();
    double level = 0.0;
    for (auto j : support) level += grad(j);
    level /= static_cast<double>(support.size());

    Eigen::Index enter = -1;
    double most_negative = -tol;
    for (Eigen::Index j = 0; j < p; ++j) {
      auto ju = static_cast<std::size_t>(j);
      if (in_support[ju] || blocked[ju]) continue;
      double reduced = grad(j) - level;
      if (reduced < most_negative) {
        most_negative = reduced;
        enter = j;
      }
    }
    if (enter < 0) break;
    in_support[static_cast<std::size_t>(enter)] = true;

    bool first = true;
    for (; iter < max_iterations; ++iter) {
      support = support_list();
      Eigen::VectorXd z = detail::affine_least_squares(y, X, support);
      double zmin = z.minCoeff();
      if (zmin > 0.0) {
        fit.weights.setZero();
        for (std::size_t i = 0; i < support.size(); ++i) fit.weights(support[i]) = z(static_cast<Eigen::Index>(i));
        std::fill(blocked.begin(), blocked.end(), false);
        break;
      }
      if (first) {
        // The entering donor cannot take positive weight: the descent
        // direction is numerical noise. Skip it until the support changes.
        auto pos = std::find(support.begin(), support.end(), enter) - support.begin();
        if (z(pos) <= 0.0) {
          in_support[static_cast<std::size_t>(enter)] = false;
          blocked[static_cast<std::size_t>(enter)] = true;
          break;
        }
      }
      first = false;
      // Move toward z until the first support weight hits zero.
      double alpha = 1.0;
      for (std::size_t i = 0; i < support.size(); ++i) {
        double zi = z(static_cast<Eigen::Index>(i));
        double wi = fit.weights(support[i]);
        if (zi <= 0.0) alpha = std::min(alpha, wi / (wi - zi));
      }
      for (std::size_t i = 0; i < support.size(); ++i) {
        auto j = support[i];
        fit.weights(j) += alpha * (z(static_cast<Eigen::Index>(i)) - fit.weights(j));
        if (fit.weights(j) <= 1e-15) {
          fit.weights(j) = 0.0;
          in_support[static_cast<std::size_t>(j)] = false;
        }
      }
      if (support_list().empty()) {
        // Rounding wiped the support; restart from the largest weight.
        Eigen::Index keep = 0;
        fit.weights.maxCoeff(&keep);
        in_support[static_cast<std::size_t>(keep)] = true;
      }
    }
  }
  fit.iterations = iter;
  fit.converged = iter < max_iterations;

  fit.weights = fit.weights.cwiseMax(0.0);
  fit.weights /= fit.weights.sum();
  fit.objective = (y - X * fit.weights).squaredNorm();
  return fit;
}

}  // namespace lexshift
