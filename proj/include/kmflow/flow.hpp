#ifndef KMFLOW_FLOW_HPP
#define KMFLOW_FLOW_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kmflow/operators.hpp"
#include "kmflow/schedules.hpp"

namespace kmflow {

/// Integration setup for dx/dt = lambda(t) (T(x) - x).
struct FlowConfig {
  enum class Method { Euler, Rk4, Rk45 };

  double t_end = 0.0;
  std::vector<double> sample_times;  // sorted, within [0, t_end]
  Method method = Method::Rk45;
  double step = 0.0;       // fixed-step methods
  double abs_tol = 1e-9;   // adaptive method
  double rel_tol = 1e-9;
  bool record_derivative = false;

  /// Throws SpecError when the configuration is inconsistent.
  void validate() const;

  std::string method_name() const;

  /// Uniform grid 0, ..., t_end with n+1 points.
  static std::vector<double> linear_samples(double t_end, int n);
  /// Grid {0} followed by n log-spaced points from t_first to t_end.
  static std::vector<double> log_samples(double t_first, double t_end, int n);
};

/// Time-stamped samples of the flow with per-sample diagnostics.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> residuals;    // |T(x(t)) - x(t)|
  std::vector<double> speeds;       // lambda(t) * residual
  std::vector<Vector> derivatives;  // filled when record_derivative

  struct Meta {
    std::string operator_label;
    std::string schedule;
    std::string method;
    std::uint64_t seed = 0;
  } meta;

  std::size_t size() const { return times.size(); }
};

/// Right-hand side lambda(t) (T(x) - x).
Vector derivative(const OperatorHandle& t_op, const Schedule& s, double t,
                  const Vector& x);

/// Integrates the flow from x0 and reports states at cfg.sample_times.
/// The adaptive method splits steps at schedule breakpoints and produces
/// dense output by cubic Hermite interpolation inside accepted steps.
/// Throws NumericalError on step-size underflow and DivergenceError when
/// the state escapes the guard radius 1e12 (1 + |x0|).
Trajectory integrate(const OperatorHandle& t_op, const Schedule& s,
                     const Vector& x0, const FlowConfig& cfg);

}  // namespace kmflow

#endif
