#include "modyn/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "modyn/errors.hpp"

namespace modyn {
namespace {

// Dormand-Prince 5(4) tableau. The last stage row doubles as the 5th-order
// weights (first-same-as-last), so an accepted step reuses k7 as the next k1.
constexpr double kC2 = 1.0 / 5.0;
constexpr double kC3 = 3.0 / 10.0;
constexpr double kC4 = 4.0 / 5.0;
constexpr double kC5 = 8.0 / 9.0;

constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                 kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;

// Difference between the 5th- and 4th-order weights, applied to the stages
// to estimate the local error.
constexpr double kE1 = 71.0 / 57600.0;
constexpr double kE3 = -71.0 / 16695.0;
constexpr double kE4 = 71.0 / 1920.0;
constexpr double kE5 = -17253.0 / 339200.0;
constexpr double kE6 = 22.0 / 525.0;
constexpr double kE7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kMinShrink = 0.2;
constexpr double kMaxGrow = 5.0;

double rms_scaled(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, const OdeOptions& opts) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale =
        opts.abs_tol + opts.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = err[i] / scale;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double initial_step(const OdeDerivative& f, double t0, const Eigen::VectorXd& y0,
                    const Eigen::VectorXd& f0, double span, const OdeOptions& opts) {
  double d0 = 0.0, d1 = 0.0;
  for (Eigen::Index i = 0; i < y0.size(); ++i) {
    const double scale = opts.abs_tol + opts.rel_tol * std::abs(y0[i]);
    d0 += (y0[i] / scale) * (y0[i] / scale);
    d1 += (f0[i] / scale) * (f0[i] / scale);
  }
  d0 = std::sqrt(d0 / static_cast<double>(y0.size()));
  d1 = std::sqrt(d1 / static_cast<double>(y0.size()));
  double h = (d0 >= 1e-5 && d1 >= 1e-5) ? 0.01 * d0 / d1 : 1e-6;
  h = std::min(h, span);

  // One explicit Euler probe to bound the second derivative.
  Eigen::VectorXd y1 = y0 + h * f0;
  Eigen::VectorXd f1(y0.size());
  f(t0 + h, y1, f1);
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < y0.size(); ++i) {
    const double scale = opts.abs_tol + opts.rel_tol * std::abs(y0[i]);
    const double df = (f1[i] - f0[i]) / scale;
    d2 += df * df;
  }
  d2 = std::sqrt(d2 / static_cast<double>(y0.size())) / h;

  const double dmax = std::max(d1, d2);
  const double h1 = (dmax > 1e-15) ? std::pow(0.01 / dmax, 0.2) : std::max(1e-6, h * 1e-3);
  h = std::min({100.0 * h, h1, span});
  if (opts.max_step > 0.0) {
    h = std::min(h, opts.max_step);
  }
  return h;
}

}  // namespace

Eigen::MatrixXd integrate_to_grid(const OdeDerivative& f, double t_start,
                                  const Eigen::VectorXd& y0, std::span<const double> t_grid,
                                  const OdeOptions& options) {
  if (t_grid.empty()) {
    return Eigen::MatrixXd(0, y0.size());
  }
  if (t_grid.front() < t_start) {
    throw std::invalid_argument("time grid starts before the initial time");
  }
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (t_grid[k] < t_grid[k - 1]) {
      throw std::invalid_argument("time grid must be nondecreasing");
    }
  }

  const Eigen::Index dim = y0.size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(t_grid.size()), dim);

  double t = t_start;
  Eigen::VectorXd y = y0;
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  Eigen::VectorXd stage(dim), y_next(dim), err(dim);
  f(t, y, k1);

  const double span = t_grid.back() - t;
  double h = span > 0.0 ? initial_step(f, t, y, k1, span, options) : 0.0;
  std::int64_t steps = 0;
  std::size_t next_report = 0;

  while (next_report < t_grid.size()) {
    const double target = t_grid[next_report];
    // Grid points are hit exactly: steps never cross the next report time.
    if (target - t <= 1e-14 * std::max(1.0, std::abs(target))) {
      out.row(static_cast<Eigen::Index>(next_report)) = y.transpose();
      ++next_report;
      continue;
    }

    if (++steps > options.max_steps) {
      std::ostringstream os;
      os << "step budget of " << options.max_steps << " exhausted at t = " << t;
      throw ToleranceNotMet(os.str());
    }
    double h_try = std::min(h, target - t);
    if (options.max_step > 0.0) {
      h_try = std::min(h_try, options.max_step);
    }
    if (!(h_try > 0.0) || t + h_try == t) {
      std::ostringstream os;
      os << "step size underflow at t = " << t;
      throw ToleranceNotMet(os.str());
    }

    stage = y + h_try * (kA21 * k1);
    f(t + kC2 * h_try, stage, k2);
    stage = y + h_try * (kA31 * k1 + kA32 * k2);
    f(t + kC3 * h_try, stage, k3);
    stage = y + h_try * (kA41 * k1 + kA42 * k2 + kA43 * k3);
    f(t + kC4 * h_try, stage, k4);
    stage = y + h_try * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
    f(t + kC5 * h_try, stage, k5);
    stage = y + h_try * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
    f(t + h_try, stage, k6);
    y_next = y + h_try * (kA71 * k1 + kA73 * k3 + kA74 * k4 + kA75 * k5 + kA76 * k6);
    f(t + h_try, y_next, k7);

    err = h_try * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
    const double err_norm = rms_scaled(err, y, y_next, options);

    if (err_norm <= 1.0) {
      t += h_try;
      y.swap(y_next);
      k1.swap(k7);
      const double grow =
          (err_norm > 1e-12) ? kSafety * std::pow(err_norm, -0.2) : kMaxGrow;
      h = h_try * std::clamp(grow, kMinShrink, kMaxGrow);
    } else {
      h = h_try * std::clamp(kSafety * std::pow(err_norm, -0.2), kMinShrink, 1.0);
    }
  }

  return out;
}

}  // namespace modyn
