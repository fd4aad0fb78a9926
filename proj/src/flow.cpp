#include "kmflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kmflow {

namespace {

constexpr double kGuardFactor = 1e12;
constexpr long kMaxSteps = 20'000'000L;

bool hits(double sample, double t) {
  return std::abs(sample - t) <= 1e-12 * std::max(1.0, std::abs(t));
}

// Cubic Hermite interpolant on [t0, t0 + h] with end values/derivatives.
Vector hermite(double theta, double h, const Vector& x0, const Vector& x1,
               const Vector& f0, const Vector& f1) {
  return (1.0 - theta) * x0 + theta * x1 +
         theta * (theta - 1.0) *
             ((1.0 - 2.0 * theta) * (x1 - x0) + (theta - 1.0) * h * f0 +
              theta * h * f1);
}

struct SampleSink {
  const std::vector<double>& wanted;
  std::size_t next = 0;
  std::vector<Vector>& states;

  bool done() const { return next >= wanted.size(); }
  double pending() const { return wanted[next]; }
  void emit(Vector x) {
    states.push_back(std::move(x));
    ++next;
  }
};

void check_state(const Vector& x, double guard) {
  if (!x.allFinite() || x.norm() > guard) {
    throw DivergenceError("trajectory left the divergence guard radius");
  }
}

}  // namespace

void FlowConfig::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw SpecError("flow horizon t_end must be positive");
  }
  if (method == Method::Euler || method == Method::Rk4) {
    if (!(step > 0.0)) throw SpecError("fixed-step method needs step > 0");
  } else {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
      throw SpecError("adaptive method needs positive tolerances");
    }
  }
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double t = sample_times[i];
    if (t < 0.0 || t > t_end * (1.0 + 1e-12)) {
      throw SpecError("sample times must lie in [0, t_end]");
    }
    if (i > 0 && t <= sample_times[i - 1]) {
      throw SpecError("sample times must be strictly increasing");
    }
  }
}

std::string FlowConfig::method_name() const {
  switch (method) {
    case Method::Euler:
      return "euler";
    case Method::Rk4:
      return "rk4";
    case Method::Rk45:
      return "rk45";
  }
  return "?";
}

std::vector<double> FlowConfig::linear_samples(double t_end, int n) {
  std::vector<double> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i) out.push_back(t_end * i / n);
  return out;
}

std::vector<double> FlowConfig::log_samples(double t_first, double t_end,
                                            int n) {
  std::vector<double> out{0.0};
  const double ratio = std::log(t_end / t_first);
  for (int i = 0; i < n; ++i) {
    out.push_back(t_first * std::exp(ratio * i / (n - 1)));
  }
  out.back() = t_end;
  return out;
}

Vector derivative(const OperatorHandle& t_op, const Schedule& s, double t,
                  const Vector& x) {
  return s.eval(t) * (t_op(x) - x);
}

namespace {

// Fixed-step driver shared by Euler and classic RK4. Samples falling inside
// a step come from linear (Euler) or cubic Hermite (RK4) interpolation;
// samples on the grid reuse the stepped state exactly, so the Euler path with
// h = 1 reproduces the discrete relaxed iteration bit for bit.
void integrate_fixed(const OperatorHandle& t_op, const Schedule& s,
                     const Vector& x0, const FlowConfig& cfg, bool rk4,
                     SampleSink& sink) {
  const double guard = kGuardFactor * (1.0 + x0.norm());
  const double h_nominal = cfg.step;
  const auto f = [&](double t, const Vector& x) {
    return derivative(t_op, s, t, x);
  };

  Vector x = x0;
  double t = 0.0;
  long k = 0;
  while (!sink.done() && hits(sink.pending(), 0.0)) sink.emit(x);

  while (t < cfg.t_end && !sink.done()) {
    double t_next = h_nominal * static_cast<double>(k + 1);
    if (t_next > cfg.t_end) t_next = cfg.t_end;
    const double h = t_next - t;
    if (!(h > 0.0)) break;

    Vector f0 = f(t, x);
    Vector x_next;
    if (rk4) {
      const Vector k1 = f0;
      const Vector k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
      const Vector k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
      const Vector k4 = f(t + h, x + h * k3);
      x_next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      x_next = x + h * f0;
    }
    check_state(x_next, guard);

    bool have_f1 = false;
    Vector f1;
    while (!sink.done() && sink.pending() <= t_next + 1e-12) {
      const double st = sink.pending();
      if (hits(st, t)) {
        sink.emit(x);
      } else if (hits(st, t_next)) {
        sink.emit(x_next);
      } else {
        const double theta = (st - t) / h;
        if (rk4) {
          if (!have_f1) {
            f1 = f(t_next, x_next);
            have_f1 = true;
          }
          sink.emit(hermite(theta, h, x, x_next, f0, f1));
        } else {
          sink.emit((1.0 - theta) * x + theta * x_next);
        }
      }
    }
    x = std::move(x_next);
    t = t_next;
    ++k;
    if (k > kMaxSteps) throw NumericalError("fixed-step budget exhausted");
  }
}

// Dormand-Prince 5(4) coefficients.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                 kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = kB1 - 5179.0 / 57600, kE3 = kB3 - 7571.0 / 16695,
                 kE4 = kB4 - 393.0 / 640, kE5 = kB5 + 92097.0 / 339200,
                 kE6 = kB6 - 187.0 / 2100, kE7 = -1.0 / 40;

void integrate_adaptive(const OperatorHandle& t_op, const Schedule& s,
                        const Vector& x0, const FlowConfig& cfg,
                        SampleSink& sink) {
  const double guard = kGuardFactor * (1.0 + x0.norm());
  const double h_min = 1e-14 * cfg.t_end;
  const auto f = [&](double t, const Vector& x) {
    return derivative(t_op, s, t, x);
  };

  // Split at schedule breakpoints so the right-hand side is smooth in t
  // within every attempted step.
  std::vector<double> stops = s.breakpoints_in(0.0, cfg.t_end);
  stops.push_back(cfg.t_end);

  Vector x = x0;
  double t = 0.0;
  while (!sink.done() && hits(sink.pending(), 0.0)) sink.emit(x);

  double h = 0.0;
  long steps = 0;
  for (double seg_end : stops) {
    if (sink.done()) break;
    if (seg_end <= t) continue;
    Vector k1 = f(t, x);  // re-evaluate at segment starts (lambda may jump)
    const double f_scale = k1.norm();
    double h_guess =
        f_scale > 1e-12 ? 0.01 * (1.0 + x.norm()) / f_scale : 0.1 * (seg_end - t);
    h = std::min(h > 0.0 ? h : h_guess, seg_end - t);

    while (seg_end - t > 1e-14 * std::max(1.0, seg_end)) {
      if (sink.done()) return;
      if (++steps > kMaxSteps) {
        throw NumericalError("adaptive step budget exhausted");
      }
      if (h < h_min) {
        throw NumericalError("adaptive step size underflow");
      }
      h = std::min(h, seg_end - t);

      const Vector k2 = f(t + kC[1] * h, x + h * (kA21 * k1));
      const Vector k3 = f(t + kC[2] * h, x + h * (kA31 * k1 + kA32 * k2));
      const Vector k4 =
          f(t + kC[3] * h, x + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
      const Vector k5 = f(t + kC[4] * h, x + h * (kA51 * k1 + kA52 * k2 +
                                                  kA53 * k3 + kA54 * k4));
      const Vector k6 =
          f(t + kC[5] * h, x + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 +
                                    kA64 * k4 + kA65 * k5));
      const Vector x_new =
          x + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
      const Vector k7 = f(t + h, x_new);

      const Vector err_vec =
          h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
      double err_sq = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double scale =
            cfg.abs_tol +
            cfg.rel_tol * std::max(std::abs(x[i]), std::abs(x_new[i]));
        const double e = err_vec[i] / scale;
        err_sq += e * e;
      }
      const double err = std::sqrt(err_sq / static_cast<double>(x.size()));

      if (!std::isfinite(err)) {
        check_state(x_new, guard);  // throws when the state itself blew up
        h *= 0.2;                   // finite state, broken stages: retry
        continue;
      }
      if (err <= 1.0) {
        check_state(x_new, guard);
        const double t_new = t + h;
        while (!sink.done() && sink.pending() <= t_new + 1e-12) {
          const double st = sink.pending();
          if (hits(st, t)) {
            sink.emit(x);
          } else if (hits(st, t_new)) {
            sink.emit(x_new);
          } else {
            sink.emit(hermite((st - t) / h, h, x, x_new, k1, k7));
          }
        }
        x = x_new;
        k1 = k7;  // FSAL
        t = t_new;
        const double factor =
            err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        h *= factor;
      } else {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    }
    t = seg_end;
  }
}

}  // namespace

Trajectory integrate(const OperatorHandle& t_op, const Schedule& s,
                     const Vector& x0, const FlowConfig& cfg) {
  cfg.validate();
  if (t_op.dim != x0.size()) {
    throw DimensionError("initial point does not match operator dimension");
  }
  if (!is_finite(x0)) throw SpecError("initial point must be finite");

  Trajectory traj;
  traj.times = cfg.sample_times;
  traj.states.reserve(traj.times.size());
  traj.meta.operator_label = t_op.label;
  traj.meta.schedule = s.describe();
  traj.meta.method = cfg.method_name();

  SampleSink sink{traj.times, 0, traj.states};
  switch (cfg.method) {
    case FlowConfig::Method::Euler:
      integrate_fixed(t_op, s, x0, cfg, /*rk4=*/false, sink);
      break;
    case FlowConfig::Method::Rk4:
      integrate_fixed(t_op, s, x0, cfg, /*rk4=*/true, sink);
      break;
    case FlowConfig::Method::Rk45:
      integrate_adaptive(t_op, s, x0, cfg, sink);
      break;
  }
  if (traj.states.size() != traj.times.size()) {
    throw NumericalError("integration ended before all samples were reached");
  }

  traj.residuals.resize(traj.size());
  traj.speeds.resize(traj.size());
  if (cfg.record_derivative) traj.derivatives.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vector gap = t_op(traj.states[i]) - traj.states[i];
    traj.residuals[i] = gap.norm();
    traj.speeds[i] = s.eval(traj.times[i]) * traj.residuals[i];
    if (cfg.record_derivative) {
      traj.derivatives[i] = s.eval(traj.times[i]) * gap;
    }
  }
  return traj;
}

}  // namespace kmflow
