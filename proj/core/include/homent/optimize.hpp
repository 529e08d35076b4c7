#pragma once

#include <functional>

#include <Eigen/Core>

namespace homent::optimize {

struct BfgsOptions {
  int max_iterations = 5000;
  /// Converged once the objective has dropped by less than this over the
  /// last `stall_window` iterations.
  double stall_tolerance = 1e-10;
  int stall_window = 50;
  double gradient_tolerance = 1e-12;
  double fd_step = 1e-6;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Quasi-Newton minimization with central-difference gradients and a
/// backtracking Armijo line search.
BfgsResult minimize_bfgs(const std::function<double(const Eigen::VectorXd&)>& f,
                         Eigen::VectorXd x0, const BfgsOptions& options = {});

}  // namespace homent::optimize
