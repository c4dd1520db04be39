#include "toggle/stochastic.hpp"

#include <cmath>
#include <stdexcept>

namespace toggle {

const Stoichiometry& stoichiometry() {
  static const Stoichiometry s = [] {
    Stoichiometry m = Stoichiometry::Zero();
    for (int i = 0; i < 4; ++i) {
      m(i, i) = 1;
      m(i, i + 4) = -1;
    }
    return m;
  }();
  return s;
}

PropensityVector propensities(const FullState& s, const ModelParams& p) {
  require_valid(s);
  return propensities_kernel<double>(s, p);
}

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

FullState em_step(const FullState& s, const InputPair& u, double dt, const WienerIncrement& dW,
                  const ModelParams& p) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("Euler-Maruyama step dt must be positive");
  }
  const PropensityVector a = propensities_kernel<double>(s, p);
  static const Eigen::Matrix<double, 4, 8> S = stoichiometry().cast<double>();
  const Eigen::Vector4d drift = S * a;
  const Eigen::Vector4d noise = S * (a.cwiseSqrt().cwiseProduct(dW));

  FullState next = s;
  next.head<4>() += drift * dt + noise;
  next[kV1] += dt * detail::diffusion(u.u1, s[kV1], p.k_in_aTc, p.k_out_aTc);
  next[kV2] += dt * detail::diffusion(u.u2, s[kV2], p.k_in_IPTG, p.k_out_IPTG);
  return next.cwiseMax(0.0);
}

FullState em_step(const FullState& s, const InputPair& u, double dt, Rng& rng, const ModelParams& p) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("Euler-Maruyama step dt must be positive");
  }
  std::normal_distribution<double> normal(0.0, std::sqrt(dt));
  WienerIncrement dW;
  for (int i = 0; i < dW.size(); ++i) {
    dW[i] = normal(rng);
  }
  return em_step(s, u, dt, dW, p);
}

}  // namespace toggle
