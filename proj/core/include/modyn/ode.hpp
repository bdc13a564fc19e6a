#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>

namespace modyn {

struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 0.0;  // 0 means unbounded
  std::int64_t max_steps = 50'000'000;
};

// Writes f(t, y) into dy; dy arrives sized like y.
using OdeDerivative =
    std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;

// Adaptive Dormand-Prince 5(4) integration of y' = f(t, y) from t_start,
// reporting the solution at every grid point. The grid must be nondecreasing
// with t_grid.front() >= t_start; returns a t_grid.size() x dim matrix whose
// row k is y(t_grid[k]). Throws ToleranceNotMet when the step size underflows
// or the step budget runs out before the last grid point.
[[nodiscard]] Eigen::MatrixXd integrate_to_grid(const OdeDerivative& f, double t_start,
                                                const Eigen::VectorXd& y0,
                                                std::span<const double> t_grid,
                                                const OdeOptions& options = {});

}  // namespace modyn
