#include "toggle/dynamics.hpp"

#include <cmath>

namespace toggle {

double hill_aTc(double v1, const ModelParams& p) {
  detail::require_non_negative(v1, "v1");
  return hill_aTc_kernel(v1, p);
}

double hill_IPTG(double v2, const ModelParams& p) {
  detail::require_non_negative(v2, "v2");
  return hill_IPTG_kernel(v2, p);
}

double hill_LacI(double x4, double v1, const ModelParams& p) {
  detail::require_non_negative(x4, "x4");
  detail::require_non_negative(v1, "v1");
  return hill_LacI_kernel(x4, v1, p);
}

double hill_TetR(double x3, double v2, const ModelParams& p) {
  detail::require_non_negative(x3, "x3");
  detail::require_non_negative(v2, "v2");
  return hill_TetR_kernel(x3, v2, p);
}

void require_valid(const FullState& s) {
  for (int i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 0.0) || !std::isfinite(s[i])) {
      throw std::domain_error("full state components must be finite and non-negative");
    }
  }
}

FullState full_rhs(const FullState& s, const InputPair& u, const ModelParams& p) {
  require_valid(s);
  detail::require_non_negative(u.u1, "u1");
  detail::require_non_negative(u.u2, "u2");
  return full_rhs_kernel<double>(s, u, p);
}

double inducer_factor_aTc(double v1, const ModelParams& p) {
  return std::pow(hill_aTc(v1, p), p.eta_TetR);
}

double inducer_factor_IPTG(double v2, const ModelParams& p) {
  return std::pow(hill_IPTG(v2, p), p.eta_LacI);
}

InducerFactors inducer_factors(double v1, double v2, const ModelParams& p) {
  return {inducer_factor_aTc(v1, p), inducer_factor_IPTG(v2, p)};
}

ReducedState reduced_rhs(const ReducedState& z, const Eigen::Vector2d& v, const ReducedCoeffs& c,
                         const ModelParams& p) {
  detail::require_non_negative(z[0], "z1");
  detail::require_non_negative(z[1], "z2");
  return reduced_rhs_kernel<double>(z, inducer_factors(v[0], v[1], p), c, p);
}

ReducedState full_to_reduced(const FullState& s, const ModelParams& p) {
  return {s[kX3] / p.theta_LacI, s[kX4] / p.theta_TetR};
}

FullState reduced_to_full(const ReducedState& z, const Eigen::Vector2d& v, const ModelParams& p) {
  FullState s;
  s[kX3] = z[0] * p.theta_LacI;
  s[kX4] = z[1] * p.theta_TetR;
  s[kX1] = p.gp_L * s[kX3] / p.kp_L;
  s[kX2] = p.gp_T * s[kX4] / p.kp_T;
  s[kV1] = v[0];
  s[kV2] = v[1];
  return s;
}

}  // namespace toggle
