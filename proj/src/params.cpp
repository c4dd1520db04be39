#include "toggle/params.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

namespace toggle {

namespace {

void require_positive(const char* key, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(key, std::string("parameter '") + key + "' must be strictly positive and finite");
  }
}

// True when `value` is a positive integer multiple of `step` up to rounding.
bool is_multiple(double value, double step) {
  if (!(step > 0.0) || !(value > 0.0)) {
    return false;
  }
  const double n = std::round(value / step);
  return n >= 1.0 && std::abs(n * step - value) <= 1e-9 * std::max(1.0, value);
}

using Slot = std::variant<double*, int*, std::uint64_t*>;

struct Binding {
  const char* key;
  Slot slot;
};

std::vector<Binding> bindings(Setup& s) {
  ModelParams& m = s.model;
  ExperimentConfig& e = s.experiment;
  return {
      {"km0_L", &m.km0_L},         {"km0_T", &m.km0_T},
      {"km_L", &m.km_L},           {"km_T", &m.km_T},
      {"kp_L", &m.kp_L},           {"kp_T", &m.kp_T},
      {"gm_L", &m.gm_L},           {"gm_T", &m.gm_T},
      {"gp_L", &m.gp_L},           {"gp_T", &m.gp_T},
      {"theta_LacI", &m.theta_LacI}, {"theta_TetR", &m.theta_TetR},
      {"theta_aTc", &m.theta_aTc}, {"theta_IPTG", &m.theta_IPTG},
      {"eta_LacI", &m.eta_LacI},   {"eta_TetR", &m.eta_TetR},
      {"eta_aTc", &m.eta_aTc},     {"eta_IPTG", &m.eta_IPTG},
      {"k_in_aTc", &m.k_in_aTc},   {"k_out_aTc", &m.k_out_aTc},
      {"k_in_IPTG", &m.k_in_IPTG}, {"k_out_IPTG", &m.k_out_IPTG},
      {"z_ref_1", &e.z_ref[0]},    {"z_ref_2", &e.z_ref[1]},
      {"z0_1", &e.z0[0]},          {"z0_2", &e.z0[1]},
      {"u1_max", &e.u1_max},       {"u2_max", &e.u2_max},
      {"horizon", &e.horizon},     {"control_period", &e.control_period},
      {"n_episodes", &e.n_episodes}, {"n_trials", &e.n_trials},
      {"alpha", &e.alpha},         {"epsilon", &e.epsilon},
      {"gamma", &e.gamma},         {"rng_seed", &e.rng_seed},
      {"dt", &e.dt},               {"log_interval", &e.log_interval},
      {"t_w", &e.t_w},             {"n_realizations", &e.n_realizations},
  };
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void assign(const std::string& key, const std::string& text, Slot slot) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  if (auto* d = std::get_if<double*>(&slot)) {
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) {
      throw ConfigError(key, "cannot parse '" + text + "' as a number for key '" + key + "'");
    }
    **d = v;
  } else if (auto* i = std::get_if<int*>(&slot)) {
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE || v < INT32_MIN || v > INT32_MAX) {
      throw ConfigError(key, "cannot parse '" + text + "' as an integer for key '" + key + "'");
    }
    **i = static_cast<int>(v);
  } else {
    if (!text.empty() && text.front() == '-') {
      throw ConfigError(key, "key '" + key + "' must be a non-negative integer");
    }
    const unsigned long long v = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE) {
      throw ConfigError(key, "cannot parse '" + text + "' as an unsigned integer for key '" + key + "'");
    }
    *std::get<std::uint64_t*>(slot) = v;
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ModelParams::validate() const {
  require_positive("km0_L", km0_L);
  require_positive("km0_T", km0_T);
  require_positive("km_L", km_L);
  require_positive("km_T", km_T);
  require_positive("kp_L", kp_L);
  require_positive("kp_T", kp_T);
  require_positive("gm_L", gm_L);
  require_positive("gm_T", gm_T);
  require_positive("gp_L", gp_L);
  require_positive("gp_T", gp_T);
  require_positive("theta_LacI", theta_LacI);
  require_positive("theta_TetR", theta_TetR);
  require_positive("theta_aTc", theta_aTc);
  require_positive("theta_IPTG", theta_IPTG);
  require_positive("eta_LacI", eta_LacI);
  require_positive("eta_TetR", eta_TetR);
  require_positive("eta_aTc", eta_aTc);
  require_positive("eta_IPTG", eta_IPTG);
  require_positive("k_in_aTc", k_in_aTc);
  require_positive("k_out_aTc", k_out_aTc);
  require_positive("k_in_IPTG", k_in_IPTG);
  require_positive("k_out_IPTG", k_out_IPTG);
  // The reduction rescales time by a single protein degradation rate.
  if (gp_L != gp_T) {
    throw ConfigError("gp_T", "gp_L and gp_T must be equal: the reduced model uses one protein degradation rate");
  }
}

ReducedCoeffs derive_reduced_coeffs(const ModelParams& p) {
  p.validate();
  const double gp = p.gp_L;
  const double lac = p.kp_L / (p.gm_L * p.theta_LacI * gp);
  const double tet = p.kp_T / (p.gm_T * p.theta_TetR * gp);
  return ReducedCoeffs{
      .k0_1 = p.km0_L * lac,
      .k0_2 = p.km0_T * tet,
      .k_1 = p.km_L * lac,
      .k_2 = p.km_T * tet,
      .gp = gp,
  };
}

int ExperimentConfig::steps_per_episode() const {
  return static_cast<int>(std::lround(horizon / control_period));
}

void ExperimentConfig::validate() const {
  require_positive("z_ref_1", z_ref[0]);
  require_positive("z_ref_2", z_ref[1]);
  if (!(z0[0] >= 0.0) || !std::isfinite(z0[0])) throw ConfigError("z0_1", "z0_1 must be non-negative");
  if (!(z0[1] >= 0.0) || !std::isfinite(z0[1])) throw ConfigError("z0_2", "z0_2 must be non-negative");
  require_positive("u1_max", u1_max);
  require_positive("u2_max", u2_max);
  require_positive("horizon", horizon);
  if (!is_multiple(control_period, kMinSensingInterval)) {
    throw ConfigError("control_period", "control_period must be a positive multiple of the 5 min sensing interval");
  }
  if (!is_multiple(horizon, control_period)) {
    throw ConfigError("horizon", "horizon must be a positive multiple of control_period");
  }
  if (n_episodes < 1) throw ConfigError("n_episodes", "n_episodes must be >= 1");
  if (n_trials < 1) throw ConfigError("n_trials", "n_trials must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha", "alpha must lie in (0, 1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon", "epsilon must lie in [0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma", "gamma must lie in [0, 1)");
  require_positive("dt", dt);
  if (!is_multiple(log_interval, kMinSensingInterval)) {
    throw ConfigError("log_interval", "log_interval must be a positive multiple of the 5 min sensing interval");
  }
  if (!is_multiple(control_period, log_interval)) {
    throw ConfigError("log_interval", "log_interval must divide control_period");
  }
  if (!is_multiple(log_interval, dt)) {
    throw ConfigError("dt", "dt must divide log_interval");
  }
  if (!is_multiple(t_w, log_interval) || !(t_w < horizon)) {
    throw ConfigError("t_w", "t_w must be a multiple of log_interval and shorter than the horizon");
  }
  if (n_realizations < 1) throw ConfigError("n_realizations", "n_realizations must be >= 1");
}

Setup parse_config(const std::string& text) {
  Setup setup;
  auto table = bindings(setup);
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = std::find_if(table.begin(), table.end(), [&](const Binding& b) { return key == b.key; });
    if (it == table.end()) {
      throw ConfigError(key, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError(key, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    assign(key, value, it->slot);
  }
  setup.model.validate();
  setup.experiment.validate();
  return setup;
}

void apply_environment_overrides(Setup& setup) {
  if (const char* env = std::getenv("TOGGLE_SEED"); env != nullptr && *env != '\0') {
    assign("TOGGLE_SEED", env, &setup.experiment.rng_seed);
  }
}

Setup load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("", "cannot open config file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  Setup setup = parse_config(buf.str());
  apply_environment_overrides(setup);
  return setup;
}

std::string to_config_text(const Setup& setup) {
  Setup copy = setup;
  std::ostringstream out;
  for (const auto& b : bindings(copy)) {
    out << b.key << " = ";
    std::visit(
        [&](auto* ptr) {
          if constexpr (std::is_same_v<decltype(ptr), double*>) {
            out << format_double(*ptr);
          } else {
            out << *ptr;
          }
        },
        b.slot);
    out << '\n';
  }
  return out.str();
}

}  // namespace toggle
