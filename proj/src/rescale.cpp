#include "kmflow/rescale.hpp"

#include <algorithm>
#include <cmath>

namespace kmflow {

double RescaleMap::operator()(double t) const {
  return inverse ? inverse_time(schedule, t, t_max) : forward_time(schedule, t);
}

double forward_time(const Schedule& s, double t) {
  if (t < 0.0) throw DomainError("forward time map needs t >= 0");
  return integral_lambda(s, 0.0, t);
}

double inverse_time(const Schedule& s, double tau, double t_max) {
  if (tau < 0.0) throw DomainError("inverse time map needs tau >= 0");
  if (!(t_max > 0.0)) throw DomainError("bracket t_max must be positive");
  if (tau == 0.0) return 0.0;
  if (forward_time(s, t_max) < tau) {
    throw RangeExceeded(
        "relaxation mass over [0, t_max] is below the requested tau");
  }
  // Bisection on the nondecreasing map forward_time; returns the smallest
  // preimage since we tighten the upper end whenever the target is reached.
  double lo = 0.0, hi = t_max;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (forward_time(s, mid) >= tau) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double rescaled_equivalence(const OperatorHandle& t_op, const Schedule& s,
                            const Vector& x0, double t_end,
                            const FlowConfig& cfg) {
  FlowConfig direct = cfg;
  direct.t_end = t_end;
  if (direct.sample_times.empty()) {
    direct.sample_times = FlowConfig::linear_samples(t_end, 64);
  }
  const Trajectory x_traj = integrate(t_op, s, x0, direct);

  // Autonomous counterpart dw/dt = -(id - T)(w), i.e. the same flow with
  // lambda fixed to 1, sampled at the rescaled times T1(t_i).
  std::vector<double> taus;
  taus.reserve(direct.sample_times.size());
  for (double t : direct.sample_times) taus.push_back(forward_time(s, t));

  FlowConfig autonomous = cfg;
  autonomous.sample_times.clear();
  for (double tau : taus) {
    if (autonomous.sample_times.empty() ||
        tau > autonomous.sample_times.back() + 1e-13) {
      autonomous.sample_times.push_back(tau);
    }
  }
  autonomous.t_end = std::max(taus.back(), 1e-12);
  const Schedule unit = Schedule::constant(1.0, std::max(1.0, s.lambda_max()));
  const Trajectory w_traj = integrate(t_op, unit, x0, autonomous);

  // Map each tau back to the nearest stored rescaled sample.
  double worst = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const auto it = std::lower_bound(w_traj.times.begin(), w_traj.times.end(),
                                     taus[i] - 1e-12);
    std::size_t j = static_cast<std::size_t>(it - w_traj.times.begin());
    if (j >= w_traj.times.size()) j = w_traj.times.size() - 1;
    worst = std::max(worst, (x_traj.states[i] - w_traj.states[j]).norm());
  }
  return worst;
}

}  // namespace kmflow
