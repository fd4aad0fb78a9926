#ifndef KMFLOW_DISCRETE_HPP
#define KMFLOW_DISCRETE_HPP

#include <vector>

#include "kmflow/operators.hpp"
#include "kmflow/schedules.hpp"

namespace kmflow {

/// Record of a discrete iteration x_{n+1} = x_n + lambda_n (T x_n - x_n).
struct IterateLog {
  std::vector<Vector> iterates;       // n_steps + 1 entries
  std::vector<double> residuals;      // |T x_n - x_n|
  std::vector<double> relaxations;    // lambda_n actually used (n_steps)
};

/// Krasnoselskii-Mann iteration with relaxations lambda_n = lam.eval(n).
/// Throws SpecError when some lambda_n falls outside [0, 1].
IterateLog km_iterate(const OperatorHandle& t_op, const Schedule& lam,
                      const Vector& x0, int n_steps);

/// Relaxed forward-backward iteration
///   x_{n+1} = x_n + lambda_n (J_{gamma A}(x_n - gamma B x_n) - x_n),
/// lambda_n in [0, delta] with delta = min{1, beta/gamma} + 1/2.
IterateLog fb_iterate(const MonotoneSpec& a, const SmoothSpec& b, double gamma,
                      const Schedule& lam, const Vector& x0, int n_steps);

/// Integrates the flow with explicit Euler at unit step, sampled on the
/// integer grid, and runs the discrete iteration with the same relaxations;
/// returns the max state discrepancy (identically zero in exact arithmetic).
double euler_equals_km(const OperatorHandle& t_op, const Schedule& s,
                       const Vector& x0, int n_steps);

}  // namespace kmflow

#endif
