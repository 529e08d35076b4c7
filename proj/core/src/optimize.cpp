#include "homent/optimize.hpp"

#include <cmath>
#include <deque>

#include <Eigen/Dense>

namespace homent::optimize {

namespace {

Eigen::VectorXd gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x(i)));
    xp(i) = x(i) + h;
    const double fp = f(xp);
    xp(i) = x(i) - h;
    const double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace

BfgsResult minimize_bfgs(const std::function<double(const Eigen::VectorXd&)>& f,
                         Eigen::VectorXd x0, const BfgsOptions& options) {
  const Eigen::Index n = x0.size();
  BfgsResult res;
  res.x = std::move(x0);
  res.value = f(res.x);
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd g = gradient(f, res.x, options.fd_step);

  std::deque<double> history{res.value};
  for (int it = 1; it <= options.max_iterations; ++it) {
    res.iterations = it;
    if (g.norm() < options.gradient_tolerance) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd dir = -h_inv * g;
    double slope = g.dot(dir);
    if (slope >= 0.0) {
      // Curvature estimate went bad; fall back to steepest descent.
      h_inv.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }
    double alpha = 1.0;
    Eigen::VectorXd x_new;
    double f_new = res.value;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = res.x + alpha * dir;
      f_new = f(x_new);
      if (std::isfinite(f_new) && f_new <= res.value + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // No descent possible along any scaled direction: at a numerical minimum.
      if (h_inv.isIdentity()) {
        res.converged = true;
        break;
      }
      h_inv.setIdentity();
      history.push_back(res.value);
      continue;
    }

    const Eigen::VectorXd g_new = gradient(f, x_new, options.fd_step);
    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
      h_inv = (id - rho * s * y.transpose()) * h_inv * (id - rho * y * s.transpose()) +
              rho * s * s.transpose();
    }
    res.x = x_new;
    res.value = f_new;
    g = g_new;

    history.push_back(res.value);
    if (static_cast<int>(history.size()) > options.stall_window) {
      const double drop = history.front() - history.back();
      history.pop_front();
      if (drop < options.stall_tolerance) {
        res.converged = true;
        break;
      }
    }
  }
  return res;
}

}  // namespace homent::optimize
