#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "toggle/dynamics.hpp"
#include "toggle/integrate.hpp"
#include "toggle/params.hpp"
#include "toggle/stochastic.hpp"

namespace toggle {

// --- state grid -------------------------------------------------------------

struct GridSpec {
  double lower = 0.0;
  double upper = 150.0;
  double coarse_step = 1.5;
  double fine_step = 0.5;
  double fine_half_width = 3.0;
};

/// Per-axis cell edges. Cell i of an axis is the half-open interval
/// [edges[i], edges[i+1]); values outside the covered range are clamped to
/// the first or last cell.
struct StateGrid {
  std::vector<double> edges1;
  std::vector<double> edges2;

  std::size_t cells1() const { return edges1.size() - 1; }
  std::size_t cells2() const { return edges2.size() - 1; }
  std::size_t size() const { return cells1() * cells2(); }

  bool operator==(const StateGrid&) const = default;
};

/// Coarse edges lower:coarse:upper per axis, with the edges inside
/// [z_ref - w, z_ref + w] replaced by fine edges anchored at z_ref - w.
StateGrid make_state_grid(const Eigen::Vector2d& z_ref, const GridSpec& spec = {});

/// Edge list for a single axis (exposed for documentation and tests).
std::vector<double> make_axis_edges(double ref, const GridSpec& spec = {});

std::size_t discretize(const ReducedState& z, const StateGrid& grid);

// --- actions ----------------------------------------------------------------

inline constexpr std::size_t kActionCount = 11;

struct ActionSpec {
  std::array<double, kActionCount> phi_levels{};
  double u1_max = 35.0;
  double u2_max = 0.35;

  bool operator==(const ActionSpec&) const = default;
};

ActionSpec make_action_spec(double u1_max, double u2_max);

/// u1 = phi u1_max, u2 = (1 - phi) u2_max. Throws if phi is not a grid level.
InputPair action_to_inputs(double phi, const ActionSpec& actions);
InputPair action_to_inputs(std::size_t action, const ActionSpec& actions);

// --- learning ---------------------------------------------------------------

double reward(const ReducedState& z, const Eigen::Vector2d& z_ref);

using QTable = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Epsilon-greedy choice over one Q row; greedy ties are broken uniformly at
/// random.
std::size_t select_action(std::span<const double> q_row, double epsilon, Rng& rng);

inline std::span<const double> row_of(const QTable& q, std::size_t s) {
  return {q.data() + s * static_cast<std::size_t>(q.cols()), static_cast<std::size_t>(q.cols())};
}

/// Watkins update of Q[s, a].
void q_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s_next, double alpha, double gamma);

struct PolicyTable {
  QTable q;
  StateGrid grid;
  ActionSpec actions;
  double alpha = 0.0;
  double epsilon = 0.0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  int episodes = 0;
  int trial = 0;

  bool operator==(const PolicyTable& o) const {
    return q.rows() == o.q.rows() && q.cols() == o.q.cols() && q == o.q && grid == o.grid &&
           actions == o.actions && alpha == o.alpha && epsilon == o.epsilon && gamma == o.gamma &&
           seed == o.seed && episodes == o.episodes && trial == o.trial;
  }
};

// --- training environment ---------------------------------------------------

/// The reduced model as an episodic environment: one step holds phi for a
/// control period with u == v (instantaneous inducer diffusion), then
/// returns the sampled state and its reward.
class ReducedToggleEnv {
public:
  explicit ReducedToggleEnv(const Setup& setup);

  const ReducedState& reset();
  const ReducedState& reset(const ReducedState& z);

  struct Step {
    ReducedState z;
    double reward;
  };
  Step step(std::size_t action);

  /// Advance by `duration` minutes under `action` without scoring it.
  ReducedState advance(std::size_t action, double duration);

  const ReducedState& state() const { return z_; }
  const ActionSpec& actions() const { return actions_; }

private:
  Setup setup_;
  ReducedCoeffs coeffs_;
  ActionSpec actions_;
  IntegratorSpec integrator_;
  std::array<InducerFactors, kActionCount> factors_;
  ReducedState z_;
};

struct TrainingResult {
  PolicyTable policy;                            // the selected trial's table
  std::vector<std::vector<double>> reward_curves;  // [trial][episode]
  std::vector<double> final_means;               // mean of each trial's last 1000 episodes
  std::size_t selected_trial = 0;
};

struct TrainOptions {
  unsigned jobs = 1;
  /// Invoked after each trial completes (trial index). May be called from
  /// worker threads.
  std::function<void(std::size_t)> on_trial_done;
};

/// Trains one trial from an all-zero Q table. Trial t draws from stream
/// (rng_seed, training, t).
PolicyTable train_trial(const Setup& setup, std::size_t trial, std::vector<double>* reward_curve);

/// Runs every trial and keeps the table of the trial with the highest mean
/// cumulative reward over its last 1000 episodes (all episodes if fewer).
TrainingResult train(const Setup& setup, const TrainOptions& options = {});

double final_plateau(std::span<const double> curve, std::size_t window = 1000);

/// Episode-wise mean over trials.
std::vector<double> mean_curve(const std::vector<std::vector<double>>& curves);

/// First episode (0-based) whose value lies within `tolerance` (relative) of
/// the final plateau, approached from below: curve[e] >= plateau -
/// tolerance * |plateau|. Returns curve.size() if never reached.
std::size_t convergence_episode(std::span<const double> curve, double tolerance = 0.05,
                                std::size_t plateau_window = 1000);

// --- persistence ------------------------------------------------------------

class PolicyFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class PolicyVersionError : public PolicyFormatError {
public:
  using PolicyFormatError::PolicyFormatError;
};
class PolicyMismatchError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kPolicyFormatVersion = 1;

void save_policy(const PolicyTable& table, const std::filesystem::path& path);
PolicyTable load_policy(const std::filesystem::path& path);

/// Throws PolicyMismatchError if the table was built for another grid or
/// action set.
void check_compatible(const PolicyTable& table, const StateGrid& grid, const ActionSpec& actions);

}  // namespace toggle
