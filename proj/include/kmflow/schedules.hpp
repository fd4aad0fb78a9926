#ifndef KMFLOW_SCHEDULES_HPP
#define KMFLOW_SCHEDULES_HPP

#include <string>
#include <vector>

#include "kmflow/errors.hpp"

namespace kmflow {

/// Relaxation function lambda : [0, inf) -> [0, lambda_max].
///
/// Four kinds are supported:
///   constant(c)            lambda(t) = c
///   hyperbolic(a)          lambda(t) = a / (t + 1)
///   piecewise(bps, vals)   vals[i] on [bps[i-1], bps[i]), left-closed
///   table(times, samples)  linear interpolation, constant past the ends
///
/// Integrals are closed-form for the first three kinds and adaptive
/// quadrature for tables. lambda_max declares the theorem regime the
/// schedule lives in ([0,1], [0,1/alpha], or [0,delta]).
class Schedule {
public:
  enum class Kind { Constant, Hyperbolic, Piecewise, Table };

  static Schedule constant(double c, double lambda_max = 1.0);
  static Schedule hyperbolic(double a, double lambda_max = 1.0);
  static Schedule piecewise(std::vector<double> breakpoints,
                            std::vector<double> values,
                            double lambda_max = 1.0);
  static Schedule table(std::vector<double> times, std::vector<double> samples,
                        double lambda_max = 1.0);

  Kind kind() const { return kind_; }
  double lambda_max() const { return lambda_max_; }

  /// lambda(t). Throws DomainError for t < 0.
  double eval(double t) const;

  /// Times in (a, b) at which the schedule is not smooth (piecewise jumps,
  /// table kinks). Integrators split steps there.
  std::vector<double> breakpoints_in(double a, double b) const;

  /// Exact infimum / supremum of lambda over [lo, hi].
  double inf_on(double lo, double hi) const;
  double sup_on(double lo, double hi) const;

  /// Infimum of lambda over the whole half line [0, inf).
  double inf_tail() const;

  std::string describe() const;

  // Payload accessors (used by config round-tripping).
  double parameter() const { return param_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

private:
  Schedule() = default;
  void check_range() const;

  Kind kind_ = Kind::Constant;
  double lambda_max_ = 1.0;
  double param_ = 0.0;               // constant c or hyperbolic a
  std::vector<double> breakpoints_;  // piecewise jumps / table times
  std::vector<double> values_;       // piecewise values / table samples
};

/// Integral of lambda over [a, b]. Throws DomainError unless 0 <= a <= b.
double integral_lambda(const Schedule& s, double a, double b);

/// Integral of lambda(t) * (ceiling - lambda(t)) over [a, b]. With
/// ceiling = 1 this is the plain Krasnoselskii-Mann divergence integrand,
/// with ceiling = delta the forward-backward one.
double integral_damped(const Schedule& s, double a, double b, double ceiling);

/// Numeric evidence for the convergence hypotheses on lambda. Verdicts are
/// exact for constant/hyperbolic kinds and finite-horizon heuristics
/// otherwise; none of them is a proof.
struct ConditionReport {
  bool inf_positive = false;      // inf lambda > 0
  double inf_estimate = 0.0;
  bool damped_divergent = false;  // integral of lambda*(ceiling - lambda) = inf
  double damped_integral = 0.0;   // value over [0, horizon]
  bool plain_divergent = false;   // integral of lambda = inf
  double plain_integral = 0.0;
  double horizon = 0.0;
  double ceiling = 1.0;
  std::string note;
};

ConditionReport check_conditions(const Schedule& s, double horizon,
                                 double ceiling);

}  // namespace kmflow

#endif
