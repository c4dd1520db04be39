#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "toggle/params.hpp"

namespace toggle {

// Layout of the full model state: mRNA (x1, x2), proteins (x3 = LacI,
// x4 = TetR), intracellular inducers (v1 = aTc, v2 = IPTG).
enum FullIndex : int { kX1 = 0, kX2, kX3, kX4, kV1, kV2 };

template <typename Scalar>
using FullStateT = Eigen::Matrix<Scalar, 6, 1>;
using FullState = FullStateT<double>;

/// Dimensionless proteins z1 = x3 / theta_LacI, z2 = x4 / theta_TetR.
template <typename Scalar>
using ReducedStateT = Eigen::Matrix<Scalar, 2, 1>;
using ReducedState = ReducedStateT<double>;

/// Extracellular inducer concentrations (aTc, IPTG), a.u.
struct InputPair {
  double u1 = 0.0;
  double u2 = 0.0;

  bool operator==(const InputPair&) const = default;
};

namespace detail {

// (x / theta)^eta with a fast path for the integer exponent 2 used throughout.
template <typename Scalar>
inline Scalar ratio_power(const Scalar& x, double theta, double eta) {
  const Scalar r = x / theta;
  if (eta == 2.0) {
    return r * r;
  }
  using std::pow;
  return pow(r, eta);
}

template <typename Scalar>
inline Scalar hill(const Scalar& x, double theta, double eta) {
  return Scalar(1) / (Scalar(1) + ratio_power(x, theta, eta));
}

inline void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0)) {
    throw std::domain_error(std::string(what) + " must be non-negative");
  }
}

// Piecewise membrane diffusion: influx rate when the outside is richer,
// efflux rate otherwise (u == v gives zero either way).
template <typename Scalar>
inline Scalar diffusion(const Scalar& outside, const Scalar& inside, double k_in, double k_out) {
  const Scalar gap = outside - inside;
  return (outside > inside ? k_in : k_out) * gap;
}

}  // namespace detail

// Unchecked kernels; arguments may be slightly negative inside integrator
// stages. The checked wrappers below are the public entry points.

template <typename Scalar>
inline Scalar hill_aTc_kernel(const Scalar& v1, const ModelParams& p) {
  return detail::hill(v1, p.theta_aTc, p.eta_aTc);
}

template <typename Scalar>
inline Scalar hill_IPTG_kernel(const Scalar& v2, const ModelParams& p) {
  return detail::hill(v2, p.theta_IPTG, p.eta_IPTG);
}

/// Fraction of the lacI promoter left free by TetR (x4), relieved by aTc (v1).
template <typename Scalar>
inline Scalar hill_LacI_kernel(const Scalar& x4, const Scalar& v1, const ModelParams& p) {
  return detail::hill(Scalar(x4 * hill_aTc_kernel(v1, p)), p.theta_TetR, p.eta_TetR);
}

/// Fraction of the tetR promoter left free by LacI (x3), relieved by IPTG (v2).
template <typename Scalar>
inline Scalar hill_TetR_kernel(const Scalar& x3, const Scalar& v2, const ModelParams& p) {
  return detail::hill(Scalar(x3 * hill_IPTG_kernel(v2, p)), p.theta_LacI, p.eta_LacI);
}

double hill_aTc(double v1, const ModelParams& p);
double hill_IPTG(double v2, const ModelParams& p);
double hill_LacI(double x4, double v1, const ModelParams& p);
double hill_TetR(double x3, double v2, const ModelParams& p);

/// Time derivative (per minute) of the full model with inducer diffusion.
template <typename Scalar>
FullStateT<Scalar> full_rhs_kernel(const FullStateT<Scalar>& s, const InputPair& u, const ModelParams& p) {
  FullStateT<Scalar> d;
  d[kX1] = p.km0_L + p.km_L * hill_LacI_kernel<Scalar>(s[kX4], s[kV1], p) - p.gm_L * s[kX1];
  d[kX2] = p.km0_T + p.km_T * hill_TetR_kernel<Scalar>(s[kX3], s[kV2], p) - p.gm_T * s[kX2];
  d[kX3] = p.kp_L * s[kX1] - p.gp_L * s[kX3];
  d[kX4] = p.kp_T * s[kX2] - p.gp_T * s[kX4];
  d[kV1] = detail::diffusion<Scalar>(Scalar(u.u1), s[kV1], p.k_in_aTc, p.k_out_aTc);
  d[kV2] = detail::diffusion<Scalar>(Scalar(u.u2), s[kV2], p.k_in_IPTG, p.k_out_IPTG);
  return d;
}

/// Checked full-model right-hand side; rejects negative states or inputs.
FullState full_rhs(const FullState& s, const InputPair& u, const ModelParams& p);

/// Static inducer response entering the reduced model: the aTc-dependent
/// factor multiplying z2^2 (resp. IPTG and z1^2). Equal to h_aTc(v1)^eta_TetR,
/// which is exactly what the quasi-steady-state elimination of mRNA from the
/// full model produces.
double inducer_factor_aTc(double v1, const ModelParams& p);
double inducer_factor_IPTG(double v2, const ModelParams& p);

/// Inducer factors precomputed once per held input.
struct InducerFactors {
  double aTc = 1.0;
  double IPTG = 1.0;
};

InducerFactors inducer_factors(double v1, double v2, const ModelParams& p);

/// Reduced model derivative with respect to dimensionless time t' = gp t.
template <typename Scalar>
ReducedStateT<Scalar> reduced_rhs_kernel(const ReducedStateT<Scalar>& z, const InducerFactors& f,
                                         const ReducedCoeffs& c, const ModelParams& p) {
  const Scalar rep2 = detail::ratio_power<Scalar>(z[1], 1.0, p.eta_TetR);
  const Scalar rep1 = detail::ratio_power<Scalar>(z[0], 1.0, p.eta_LacI);
  ReducedStateT<Scalar> d;
  d[0] = c.k0_1 + c.k_1 / (Scalar(1) + rep2 * f.aTc) - z[0];
  d[1] = c.k0_2 + c.k_2 / (Scalar(1) + rep1 * f.IPTG) - z[1];
  return d;
}

/// Checked reduced-model right-hand side; `v` holds intracellular (aTc, IPTG).
ReducedState reduced_rhs(const ReducedState& z, const Eigen::Vector2d& v, const ReducedCoeffs& c,
                         const ModelParams& p);

ReducedState full_to_reduced(const FullState& s, const ModelParams& p);

/// Full state consistent with a reduced one: proteins from z, mRNA at their
/// quasi-steady state x1 = gp_L x3 / kp_L (x2 alike), inducers as given.
FullState reduced_to_full(const ReducedState& z, const Eigen::Vector2d& v, const ModelParams& p);

void require_valid(const FullState& s);

}  // namespace toggle
