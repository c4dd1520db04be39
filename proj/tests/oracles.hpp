#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical kernels.

#include <cmath>
#include <functional>
#include <vector>

namespace toggle::oracle {

// Published parameter values, spelled out again so coefficient checks do not
// go through ModelParams defaults.
struct Table {
  static constexpr double km0_L = 3.20e-2, km0_T = 1.19e-1, km_L = 8.30, km_T = 2.06;
  static constexpr double kp = 9.726e-1, gm = 1.386e-1, gp = 1.65e-2;
  static constexpr double theta_LacI = 31.94, theta_TetR = 30.0, theta_aTc = 11.65, theta_IPTG = 9.06e-2;
  static constexpr double k_in_aTc = 2.75e-2, k_out_aTc = 2.0e-2, k_in_IPTG = 1.62e-1, k_out_IPTG = 1.11e-1;
};

inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// All sign changes of f on [lo, hi] found by scanning `samples` intervals and
/// refining each by bisection.
inline std::vector<double> roots(const std::function<double(double)>& f, double lo, double hi, int samples) {
  std::vector<double> out;
  double a = lo;
  double fa = f(a);
  for (int i = 1; i <= samples; ++i) {
    const double b = lo + (hi - lo) * i / samples;
    const double fb = f(b);
    if ((fa < 0) != (fb < 0)) {
      out.push_back(bisect(f, a, b));
    }
    a = b;
    fa = fb;
  }
  return out;
}

/// Direct windowed trapezoid sum, O(n w).
inline std::vector<double> windowed_average(const std::vector<double>& x, double dt, int w) {
  std::vector<double> out;
  for (std::size_t i = static_cast<std::size_t>(w); i < x.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = i - static_cast<std::size_t>(w); j < i; ++j) {
      s += 0.5 * (x[j] + x[j + 1]) * dt;
    }
    out.push_back(s / (w * dt));
  }
  return out;
}

/// Value iteration for a deterministic MDP given as next[s][a], reward[s][a].
inline std::vector<std::vector<double>> q_value_iteration(const std::vector<std::vector<int>>& next,
                                                          const std::vector<std::vector<double>>& reward,
                                                          double gamma, double tol = 1e-14) {
  const std::size_t ns = next.size();
  const std::size_t na = next[0].size();
  std::vector<std::vector<double>> q(ns, std::vector<double>(na, 0.0));
  for (int it = 0; it < 100000; ++it) {
    double delta = 0.0;
    auto fresh = q;
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t a = 0; a < na; ++a) {
        const auto& row = q[static_cast<std::size_t>(next[s][a])];
        double best = row[0];
        for (double v : row) best = std::max(best, v);
        fresh[s][a] = reward[s][a] + gamma * best;
        delta = std::max(delta, std::abs(fresh[s][a] - q[s][a]));
      }
    }
    q = fresh;
    if (delta < tol) break;
  }
  return q;
}

}  // namespace toggle::oracle
