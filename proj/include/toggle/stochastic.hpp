#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "toggle/dynamics.hpp"

namespace toggle {

using Stoichiometry = Eigen::Matrix<int, 4, 8>;
using PropensityVector = Eigen::Matrix<double, 8, 1>;
using WienerIncrement = Eigen::Matrix<double, 8, 1>;

/// Reactions 1-4 produce x1..x4, reactions 5-8 degrade them.
const Stoichiometry& stoichiometry();

PropensityVector propensities(const FullState& s, const ModelParams& p);

template <typename Scalar>
Eigen::Matrix<Scalar, 8, 1> propensities_kernel(const FullStateT<Scalar>& s, const ModelParams& p) {
  Eigen::Matrix<Scalar, 8, 1> a;
  a << p.km0_L + p.km_L * hill_LacI_kernel<Scalar>(s[kX4], s[kV1], p),
      p.km0_T + p.km_T * hill_TetR_kernel<Scalar>(s[kX3], s[kV2], p), p.kp_L * s[kX1], p.kp_T * s[kX2],
      p.gm_L * s[kX1], p.gm_T * s[kX2], p.gp_L * s[kX3], p.gp_T * s[kX4];
  return a;
}

/// Random source for the Langevin stepper and the agent. Seeded through
/// std::seed_seq from (base seed, stream kind, index) so that trials and
/// realizations draw from disjoint, reproducible streams.
using Rng = std::mt19937_64;

enum class Stream : std::uint32_t { kTraining = 1, kValidation = 2 };

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index);

/// One Euler-Maruyama step of the chemical Langevin equation with the given
/// Wiener increments (each of variance dt). Inducers follow the
/// deterministic diffusion law; every component is clamped to >= 0.
FullState em_step(const FullState& s, const InputPair& u, double dt, const WienerIncrement& dW,
                  const ModelParams& p);

/// Same, drawing dW ~ N(0, dt I_8) from `rng`.
FullState em_step(const FullState& s, const InputPair& u, double dt, Rng& rng, const ModelParams& p);

}  // namespace toggle
