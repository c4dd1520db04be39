#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace toggle {

/// Raised for malformed config text or parameter invariant violations. `key()`
/// names the offending key when one is known.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Rate constants of the LacI/TetR toggle switch. Units: transcription rates in
/// mRNA/min, translation in a.u./(mRNA min), degradation and membrane
/// diffusion in 1/min, thresholds in a.u.; Hill exponents are dimensionless.
/// Defaults are the published cell-population parameter set.
struct ModelParams {
  double km0_L = 3.20e-2;
  double km0_T = 1.19e-1;
  double km_L = 8.30;
  double km_T = 2.06;
  double kp_L = 9.726e-1;
  double kp_T = 9.726e-1;
  double gm_L = 1.386e-1;
  double gm_T = 1.386e-1;
  double gp_L = 1.65e-2;
  double gp_T = 1.65e-2;
  double theta_LacI = 31.94;
  double theta_TetR = 30.00;
  double theta_aTc = 11.65;
  double theta_IPTG = 9.06e-2;
  double eta_LacI = 2.0;
  double eta_TetR = 2.0;
  double eta_aTc = 2.0;
  double eta_IPTG = 2.0;
  double k_in_aTc = 2.75e-2;
  double k_out_aTc = 2.00e-2;
  double k_in_IPTG = 1.62e-1;
  double k_out_IPTG = 1.11e-1;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

/// Dimensionless coefficients of the two-state reduced model.
struct ReducedCoeffs {
  double k0_1 = 0.0;
  double k0_2 = 0.0;
  double k_1 = 0.0;
  double k_2 = 0.0;
  double gp = 0.0;  // shared protein degradation rate (1/min), the time scale
};

ReducedCoeffs derive_reduced_coeffs(const ModelParams& p);

/// Training and validation settings. Times are in minutes; z-vectors are
/// dimensionless (protein / threshold).
struct ExperimentConfig {
  Eigen::Vector2d z_ref{23.48, 10.00};
  Eigen::Vector2d z0{20.68, 2.11};
  double u1_max = 35.0;
  double u2_max = 0.35;
  double horizon = 4320.0;
  double control_period = 15.0;
  int n_episodes = 10000;
  int n_trials = 10;
  double alpha = 0.8;
  double epsilon = 0.1;
  double gamma = 0.9;
  std::uint64_t rng_seed = 1;

  // Simulation knobs.
  double dt = 0.1;            // integrator / Euler-Maruyama step, minutes
  double log_interval = 5.0;  // trace sampling, minutes
  double t_w = 240.0;         // moving-average window, minutes
  int n_realizations = 10;

  int steps_per_episode() const;

  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Shortest interval at which cells may be imaged.
inline constexpr double kMinSensingInterval = 5.0;

struct Setup {
  ModelParams model;
  ExperimentConfig experiment;

  bool operator==(const Setup&) const = default;
};

/// Parses the flat `key = value` format (see docs/config.md). Keys that are
/// absent keep their defaults. Unknown keys, duplicate keys and invalid values
/// raise ConfigError.
Setup parse_config(const std::string& text);

/// Reads and parses a config file, then applies the TOGGLE_SEED environment
/// override (rng_seed only).
Setup load_config(const std::filesystem::path& path);

/// Emits every key at full precision; `parse_config(to_config_text(s)) == s`.
std::string to_config_text(const Setup& setup);

/// Applies TOGGLE_SEED if set. Exposed for the CLI's no-config path.
void apply_environment_overrides(Setup& setup);

}  // namespace toggle
