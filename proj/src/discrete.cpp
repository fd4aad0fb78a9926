#include "kmflow/discrete.hpp"

#include <algorithm>
#include <cmath>

#include "kmflow/flow.hpp"

namespace kmflow {

namespace {

IterateLog run_relaxed(const OperatorHandle& t_op, const Schedule& lam,
                       const Vector& x0, int n_steps, double lam_cap) {
  if (n_steps < 0) throw SpecError("step count must be nonnegative");
  if (t_op.dim != x0.size()) {
    throw DimensionError("initial point does not match operator dimension");
  }
  IterateLog log;
  log.iterates.reserve(n_steps + 1);
  log.residuals.reserve(n_steps + 1);
  log.relaxations.reserve(n_steps);

  Vector x = x0;
  for (int n = 0; n <= n_steps; ++n) {
    const Vector tx = t_op(x);
    log.iterates.push_back(x);
    log.residuals.push_back((tx - x).norm());
    if (n == n_steps) break;
    const double l = lam.eval(static_cast<double>(n));
    if (l < 0.0 || l > lam_cap * (1.0 + 1e-12)) {
      throw SpecError("relaxation lambda_n outside [0, " +
                      std::to_string(lam_cap) + "]");
    }
    log.relaxations.push_back(l);
    // Same arithmetic as the unit-step Euler path in flow::integrate.
    x = x + l * (tx - x);
  }
  return log;
}

}  // namespace

IterateLog km_iterate(const OperatorHandle& t_op, const Schedule& lam,
                      const Vector& x0, int n_steps) {
  return run_relaxed(t_op, lam, x0, n_steps, 1.0);
}

IterateLog fb_iterate(const MonotoneSpec& a, const SmoothSpec& b, double gamma,
                      const Schedule& lam, const Vector& x0, int n_steps) {
  const ForwardBackward fb = make_forward_backward(a, b, gamma);
  return run_relaxed(fb.op, lam, x0, n_steps, fb.delta);
}

double euler_equals_km(const OperatorHandle& t_op, const Schedule& s,
                       const Vector& x0, int n_steps) {
  if (n_steps < 1) return 0.0;

  FlowConfig cfg;
  cfg.method = FlowConfig::Method::Euler;
  cfg.step = 1.0;
  cfg.t_end = static_cast<double>(n_steps);
  for (int n = 0; n <= n_steps; ++n) {
    cfg.sample_times.push_back(static_cast<double>(n));
  }
  const Trajectory euler = integrate(t_op, s, x0, cfg);
  const IterateLog km = km_iterate(t_op, s, x0, n_steps);

  double worst = 0.0;
  for (int n = 0; n <= n_steps; ++n) {
    worst = std::max(worst, (euler.states[n] - km.iterates[n]).norm());
  }
  return worst;
}

}  // namespace kmflow
