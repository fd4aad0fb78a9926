#include "kmflow/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace kmflow {

namespace {

void require_interval(double a, double b) {
  if (!(a >= 0.0) || !(b >= a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integration interval must satisfy 0 <= a <= b");
  }
}

// Adaptive Simpson with absolute tolerance. The integrands here are smooth
// between schedule kinks, so recursion stays shallow.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double quadrature(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

Schedule Schedule::constant(double c, double lambda_max) {
  Schedule s;
  s.kind_ = Kind::Constant;
  s.param_ = c;
  s.lambda_max_ = lambda_max;
  s.check_range();
  return s;
}

Schedule Schedule::hyperbolic(double a, double lambda_max) {
  Schedule s;
  s.kind_ = Kind::Hyperbolic;
  s.param_ = a;
  s.lambda_max_ = lambda_max;
  s.check_range();
  return s;
}

Schedule Schedule::piecewise(std::vector<double> breakpoints,
                             std::vector<double> values, double lambda_max) {
  Schedule s;
  s.kind_ = Kind::Piecewise;
  s.breakpoints_ = std::move(breakpoints);
  s.values_ = std::move(values);
  s.lambda_max_ = lambda_max;
  if (s.values_.size() != s.breakpoints_.size() + 1) {
    throw SpecError("piecewise schedule needs one more value than breakpoints");
  }
  for (std::size_t i = 0; i < s.breakpoints_.size(); ++i) {
    if (s.breakpoints_[i] <= 0.0 ||
        (i > 0 && s.breakpoints_[i] <= s.breakpoints_[i - 1])) {
      throw SpecError("piecewise breakpoints must be strictly increasing");
    }
  }
  s.check_range();
  return s;
}

Schedule Schedule::table(std::vector<double> times, std::vector<double> samples,
                         double lambda_max) {
  Schedule s;
  s.kind_ = Kind::Table;
  s.breakpoints_ = std::move(times);
  s.values_ = std::move(samples);
  s.lambda_max_ = lambda_max;
  if (s.breakpoints_.empty() || s.breakpoints_.size() != s.values_.size()) {
    throw SpecError("table schedule needs matching nonempty times and samples");
  }
  for (std::size_t i = 0; i < s.breakpoints_.size(); ++i) {
    if (s.breakpoints_[i] < 0.0 ||
        (i > 0 && s.breakpoints_[i] <= s.breakpoints_[i - 1])) {
      throw SpecError("table times must be nonnegative, strictly increasing");
    }
  }
  s.check_range();
  return s;
}

void Schedule::check_range() const {
  if (!(lambda_max_ > 0.0) || !std::isfinite(lambda_max_)) {
    throw SpecError("schedule upper bound must be positive");
  }
  auto in_range = [&](double v) {
    return std::isfinite(v) && v >= 0.0 && v <= lambda_max_ + 1e-15;
  };
  switch (kind_) {
    case Kind::Constant:
    case Kind::Hyperbolic:
      // Extremum at t = 0 for both kinds.
      if (!in_range(param_)) {
        throw SpecError("schedule value outside [0, lambda_max]");
      }
      break;
    case Kind::Piecewise:
    case Kind::Table:
      for (double v : values_) {
        if (!in_range(v)) {
          throw SpecError("schedule value outside [0, lambda_max]");
        }
      }
      break;
  }
}

double Schedule::eval(double t) const {
  if (t < 0.0 || !std::isfinite(t)) {
    throw DomainError("schedule evaluated at t < 0");
  }
  switch (kind_) {
    case Kind::Constant:
      return param_;
    case Kind::Hyperbolic:
      return param_ / (t + 1.0);
    case Kind::Piecewise: {
      const auto it =
          std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
      return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
    }
    case Kind::Table: {
      if (t <= breakpoints_.front()) return values_.front();
      if (t >= breakpoints_.back()) return values_.back();
      const auto it =
          std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin());
      const double t0 = breakpoints_[i - 1], t1 = breakpoints_[i];
      const double w = (t - t0) / (t1 - t0);
      return (1.0 - w) * values_[i - 1] + w * values_[i];
    }
  }
  return 0.0;  // unreachable
}

std::vector<double> Schedule::breakpoints_in(double a, double b) const {
  std::vector<double> out;
  if (kind_ == Kind::Piecewise || kind_ == Kind::Table) {
    for (double bp : breakpoints_) {
      if (bp > a && bp < b) out.push_back(bp);
    }
  }
  return out;
}

double Schedule::inf_on(double lo, double hi) const {
  switch (kind_) {
    case Kind::Constant:
      return param_;
    case Kind::Hyperbolic:
      return eval(hi);  // decreasing for param_ >= 0
    case Kind::Piecewise: {
      double m = eval(lo);
      for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (breakpoints_[i] > lo && breakpoints_[i] <= hi) {
          m = std::min(m, values_[i + 1]);
        }
      }
      return m;
    }
    case Kind::Table: {
      double m = std::min(eval(lo), eval(hi));
      for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (breakpoints_[i] >= lo && breakpoints_[i] <= hi) {
          m = std::min(m, values_[i]);
        }
      }
      return m;
    }
  }
  return 0.0;
}

double Schedule::sup_on(double lo, double hi) const {
  switch (kind_) {
    case Kind::Constant:
      return param_;
    case Kind::Hyperbolic:
      return eval(lo);
    case Kind::Piecewise: {
      double m = eval(lo);
      for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (breakpoints_[i] > lo && breakpoints_[i] <= hi) {
          m = std::max(m, values_[i + 1]);
        }
      }
      return m;
    }
    case Kind::Table: {
      double m = std::max(eval(lo), eval(hi));
      for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (breakpoints_[i] >= lo && breakpoints_[i] <= hi) {
          m = std::max(m, values_[i]);
        }
      }
      return m;
    }
  }
  return 0.0;
}

double Schedule::inf_tail() const {
  switch (kind_) {
    case Kind::Constant:
      return param_;
    case Kind::Hyperbolic:
      return 0.0;  // lambda(t) -> 0
    case Kind::Piecewise:
    case Kind::Table:
      return values_.back();
  }
  return 0.0;
}

std::string Schedule::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant:
      os << "constant(" << param_ << ")";
      break;
    case Kind::Hyperbolic:
      os << "hyperbolic(" << param_ << ")";
      break;
    case Kind::Piecewise:
      os << "piecewise(" << values_.size() << " pieces)";
      break;
    case Kind::Table:
      os << "table(" << values_.size() << " samples)";
      break;
  }
  return os.str();
}

double integral_lambda(const Schedule& s, double a, double b) {
  require_interval(a, b);
  if (a == b) return 0.0;
  switch (s.kind()) {
    case Schedule::Kind::Constant:
      return s.parameter() * (b - a);
    case Schedule::Kind::Hyperbolic:
      return s.parameter() * (std::log1p(b) - std::log1p(a));
    case Schedule::Kind::Piecewise: {
      double total = 0.0;
      double lo = a;
      for (double bp : s.breakpoints_in(a, b)) {
        total += s.eval(lo) * (bp - lo);
        lo = bp;
      }
      total += s.eval(lo) * (b - lo);
      return total;
    }
    case Schedule::Kind::Table: {
      double total = 0.0;
      double lo = a;
      auto kinks = s.breakpoints_in(a, b);
      kinks.push_back(b);
      for (double hi : kinks) {
        total += quadrature([&](double t) { return s.eval(t); }, lo, hi, 1e-10);
        lo = hi;
      }
      return total;
    }
  }
  return 0.0;
}

double integral_damped(const Schedule& s, double a, double b, double ceiling) {
  require_interval(a, b);
  if (!(ceiling > 0.0)) throw DomainError("ceiling must be positive");
  if (a == b) return 0.0;
  switch (s.kind()) {
    case Schedule::Kind::Constant: {
      const double c = s.parameter();
      return c * (ceiling - c) * (b - a);
    }
    case Schedule::Kind::Hyperbolic: {
      // integral of p*C/(1+t) - p^2/(1+t)^2
      const double p = s.parameter();
      return p * ceiling * (std::log1p(b) - std::log1p(a)) -
             p * p * (1.0 / (1.0 + a) - 1.0 / (1.0 + b));
    }
    case Schedule::Kind::Piecewise: {
      double total = 0.0;
      double lo = a;
      auto kinks = s.breakpoints_in(a, b);
      kinks.push_back(b);
      for (double hi : kinks) {
        const double c = s.eval(lo);
        total += c * (ceiling - c) * (hi - lo);
        lo = hi;
      }
      return total;
    }
    case Schedule::Kind::Table: {
      double total = 0.0;
      double lo = a;
      auto kinks = s.breakpoints_in(a, b);
      kinks.push_back(b);
      const auto f = [&](double t) {
        const double l = s.eval(t);
        return l * (ceiling - l);
      };
      for (double hi : kinks) {
        total += quadrature(f, lo, hi, 1e-10);
        lo = hi;
      }
      return total;
    }
  }
  return 0.0;
}

ConditionReport check_conditions(const Schedule& s, double horizon,
                                 double ceiling) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  if (!(ceiling > 0.0)) throw DomainError("ceiling must be positive");

  ConditionReport r;
  r.horizon = horizon;
  r.ceiling = ceiling;
  r.inf_estimate = std::min(s.inf_on(0.0, horizon), s.inf_tail());
  r.inf_positive = r.inf_estimate > 0.0;
  r.damped_integral = integral_damped(s, 0.0, horizon, ceiling);
  r.plain_integral = integral_lambda(s, 0.0, horizon);

  switch (s.kind()) {
    case Schedule::Kind::Constant: {
      const double c = s.parameter();
      r.damped_divergent = c > 0.0 && c < ceiling;
      r.plain_divergent = c > 0.0;
      r.note = "exact verdict (constant)";
      break;
    }
    case Schedule::Kind::Hyperbolic: {
      // lambda*(C - lambda) ~ a*C/t for large t: divergent whenever a > 0.
      const double p = s.parameter();
      r.damped_divergent = p > 0.0;
      r.plain_divergent = p > 0.0;
      r.note = "exact verdict (hyperbolic)";
      break;
    }
    case Schedule::Kind::Piecewise:
    case Schedule::Kind::Table: {
      // Growth heuristic: the integral over [0, horizon] must still be
      // accumulating in the second half, otherwise it has saturated.
      const double dh = integral_damped(s, 0.0, 0.5 * horizon, ceiling);
      const double ph = integral_lambda(s, 0.0, 0.5 * horizon);
      r.damped_divergent =
          r.damped_integral - dh > 1e-8 + 1e-3 * std::abs(dh);
      r.plain_divergent = r.plain_integral - ph > 1e-8 + 1e-3 * std::abs(ph);
      r.note = "numeric evidence over finite horizon, not a proof";
      break;
    }
  }
  return r;
}

}  // namespace kmflow
