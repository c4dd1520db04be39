#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace toggle {

enum class Method { kRk4, kEuler };

/// Fixed-step explicit integrator. `dt` is in the caller's time unit
/// (minutes for the full model, dimensionless t' for the reduced one).
struct IntegratorSpec {
  Method method = Method::kRk4;
  double dt = 0.1;
};

/// Number of `dt` steps in `duration`; throws unless it is a positive integer
/// multiple (relative tolerance 1e-9).
inline long step_count(double duration, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("integrator step must be positive");
  }
  const double n = std::round(duration / dt);
  if (!(n >= 1.0) || std::abs(n * dt - duration) > 1e-9 * std::max(std::abs(duration), dt)) {
    throw std::invalid_argument("hold duration must be a positive multiple of the integrator step");
  }
  return static_cast<long>(n);
}

namespace detail {

inline double clamp_non_negative(double s) { return std::max(s, 0.0); }

template <typename Derived>
inline typename Derived::PlainObject clamp_non_negative(const Eigen::MatrixBase<Derived>& s) {
  return s.cwiseMax(typename Derived::Scalar(0));
}

template <typename State, typename Rhs>
inline State rk4_step(const Rhs& rhs, const State& s, double h) {
  const State k1 = rhs(s);
  const State k2 = rhs(State(s + (0.5 * h) * k1));
  const State k3 = rhs(State(s + (0.5 * h) * k2));
  const State k4 = rhs(State(s + h * k3));
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// Advances `s0` over `hold_duration` with the inputs captured by `rhs` held
/// constant. The state is clamped to be non-negative after every step.
template <typename State, typename Rhs>
State integrate_hold(const Rhs& rhs, State s0, double hold_duration, const IntegratorSpec& spec) {
  const long n = step_count(hold_duration, spec.dt);
  const double h = spec.dt;
  State s = std::move(s0);
  for (long i = 0; i < n; ++i) {
    if (spec.method == Method::kRk4) {
      s = detail::rk4_step(rhs, s, h);
    } else {
      s = s + h * rhs(s);
    }
    s = detail::clamp_non_negative(s);
  }
  return s;
}

}  // namespace toggle
