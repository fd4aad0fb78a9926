#ifndef KMFLOW_RESCALE_HPP
#define KMFLOW_RESCALE_HPP

#include "kmflow/flow.hpp"
#include "kmflow/schedules.hpp"

namespace kmflow {

/// New clock tau = T1(t) = integral of lambda over [0, t] (forward), or its
/// inverse T2 with T2'(t) lambda(T2(t)) = 1 (inverse, solved numerically on
/// [0, t_max]).
struct RescaleMap {
  Schedule schedule;
  bool inverse = false;
  double t_max = 0.0;  // search bracket for the inverse direction

  double operator()(double t) const;
};

/// T1(t): accumulated relaxation mass up to t; nondecreasing, T1(0) = 0.
double forward_time(const Schedule& s, double t);

/// Smallest u in [0, t_max] with forward_time(s, u) = tau, found by bracketed
/// root-finding to absolute tolerance 1e-10. Throws RangeExceeded when the
/// bracket cannot realize tau (finite total relaxation mass).
double inverse_time(const Schedule& s, double tau, double t_max);

/// Integrates the nonautonomous flow for (T, s) and the autonomous flow
/// dw/dt = T(w) - w, then compares x(t_i) against w(T1(t_i)) at every sample;
/// returns the max discrepancy. The two are the same curve in the continuum.
double rescaled_equivalence(const OperatorHandle& t_op, const Schedule& s,
                            const Vector& x0, double t_end,
                            const FlowConfig& cfg);

}  // namespace kmflow

#endif
