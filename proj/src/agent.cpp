#include "toggle/agent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "toggle/parallel.hpp"

namespace toggle {

namespace {

constexpr double kEdgeTolerance = 1e-9;

}  // namespace

std::vector<double> make_axis_edges(double ref, const GridSpec& spec) {
  const double lo = ref - spec.fine_half_width;
  const double hi = ref + spec.fine_half_width;

  std::vector<double> edges;
  const long coarse_n = std::lround(std::ceil((spec.upper - spec.lower) / spec.coarse_step - kEdgeTolerance));
  for (long k = 0; k <= coarse_n; ++k) {
    const double e = spec.lower + static_cast<double>(k) * spec.coarse_step;
    if (e < lo - kEdgeTolerance || e > hi + kEdgeTolerance) {
      edges.push_back(e);
    }
  }
  const double top = edges.back();
  const long fine_n = std::lround((hi - lo) / spec.fine_step);
  for (long k = 0; k <= fine_n; ++k) {
    const double e = lo + static_cast<double>(k) * spec.fine_step;
    if (e >= spec.lower - kEdgeTolerance && e <= top + kEdgeTolerance) {
      edges.push_back(std::max(e, spec.lower));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) <= kEdgeTolerance; }),
              edges.end());
  return edges;
}

StateGrid make_state_grid(const Eigen::Vector2d& z_ref, const GridSpec& spec) {
  return {make_axis_edges(z_ref[0], spec), make_axis_edges(z_ref[1], spec)};
}

namespace {

std::size_t cell_of(double x, const std::vector<double>& edges) {
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  const auto raw = static_cast<std::ptrdiff_t>(it - edges.begin()) - 1;
  const auto last = static_cast<std::ptrdiff_t>(edges.size()) - 2;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(raw, 0, last));
}

}  // namespace

std::size_t discretize(const ReducedState& z, const StateGrid& grid) {
  return cell_of(z[0], grid.edges1) * grid.cells2() + cell_of(z[1], grid.edges2);
}

ActionSpec make_action_spec(double u1_max, double u2_max) {
  ActionSpec spec;
  for (std::size_t k = 0; k < kActionCount; ++k) {
    spec.phi_levels[k] = static_cast<double>(k) / static_cast<double>(kActionCount - 1);
  }
  spec.u1_max = u1_max;
  spec.u2_max = u2_max;
  return spec;
}

InputPair action_to_inputs(std::size_t action, const ActionSpec& actions) {
  if (action >= kActionCount) {
    throw std::out_of_range("action index out of range");
  }
  const double phi = actions.phi_levels[action];
  return {phi * actions.u1_max, (1.0 - phi) * actions.u2_max};
}

InputPair action_to_inputs(double phi, const ActionSpec& actions) {
  const auto& levels = actions.phi_levels;
  const auto it = std::find_if(levels.begin(), levels.end(), [&](double l) { return std::abs(l - phi) <= 1e-12; });
  if (it == levels.end()) {
    throw std::invalid_argument("phi is not one of the action levels");
  }
  return action_to_inputs(static_cast<std::size_t>(it - levels.begin()), actions);
}

double reward(const ReducedState& z, const Eigen::Vector2d& z_ref) {
  return -(z_ref - z).cwiseQuotient(z_ref).squaredNorm();
}

std::size_t select_action(std::span<const double> q_row, double epsilon, Rng& rng) {
  const std::size_t n = q_row.size();
  if (epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }
  const double best = *std::max_element(q_row.begin(), q_row.end());
  std::array<std::size_t, kActionCount> ties{};
  std::size_t count = 0;
  for (std::size_t a = 0; a < n && count < ties.size(); ++a) {
    if (q_row[a] == best) {
      ties[count++] = a;
    }
  }
  if (count == 1) {
    return ties[0];
  }
  return ties[std::uniform_int_distribution<std::size_t>(0, count - 1)(rng)];
}

void q_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s_next, double alpha, double gamma) {
  const double target = r + gamma * q.row(static_cast<Eigen::Index>(s_next)).maxCoeff();
  double& entry = q(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a));
  entry += alpha * (target - entry);
}

ReducedToggleEnv::ReducedToggleEnv(const Setup& setup)
    : setup_(setup),
      coeffs_(derive_reduced_coeffs(setup.model)),
      actions_(make_action_spec(setup.experiment.u1_max, setup.experiment.u2_max)),
      integrator_{Method::kRk4, coeffs_.gp * setup.experiment.dt},
      z_(setup.experiment.z0) {
  for (std::size_t a = 0; a < kActionCount; ++a) {
    const InputPair u = action_to_inputs(a, actions_);
    factors_[a] = inducer_factors(u.u1, u.u2, setup_.model);
  }
}

const ReducedState& ReducedToggleEnv::reset() { return reset(setup_.experiment.z0); }

const ReducedState& ReducedToggleEnv::reset(const ReducedState& z) {
  z_ = z;
  return z_;
}

ReducedState ReducedToggleEnv::advance(std::size_t action, double duration) {
  const InducerFactors f = factors_.at(action);
  const ModelParams& p = setup_.model;
  const ReducedCoeffs& c = coeffs_;
  const auto rhs = [&](const ReducedState& z) { return reduced_rhs_kernel<double>(z, f, c, p); };
  z_ = integrate_hold(rhs, z_, c.gp * duration, integrator_);
  return z_;
}

ReducedToggleEnv::Step ReducedToggleEnv::step(std::size_t action) {
  advance(action, setup_.experiment.control_period);
  return {z_, reward(z_, setup_.experiment.z_ref)};
}

PolicyTable train_trial(const Setup& setup, std::size_t trial, std::vector<double>* reward_curve) {
  const ExperimentConfig& cfg = setup.experiment;
  ReducedToggleEnv env(setup);
  PolicyTable table;
  table.grid = make_state_grid(cfg.z_ref);
  table.actions = env.actions();
  table.q = QTable::Zero(static_cast<Eigen::Index>(table.grid.size()), static_cast<Eigen::Index>(kActionCount));
  table.alpha = cfg.alpha;
  table.epsilon = cfg.epsilon;
  table.gamma = cfg.gamma;
  table.seed = cfg.rng_seed;
  table.episodes = cfg.n_episodes;
  table.trial = static_cast<int>(trial);

  Rng rng = make_rng(cfg.rng_seed, Stream::kTraining, trial);
  const int steps = cfg.steps_per_episode();
  if (reward_curve != nullptr) {
    reward_curve->assign(static_cast<std::size_t>(cfg.n_episodes), 0.0);
  }
  for (int episode = 0; episode < cfg.n_episodes; ++episode) {
    std::size_t s = discretize(env.reset(), table.grid);
    double cumulative = 0.0;
    for (int k = 0; k < steps; ++k) {
      const std::size_t a = select_action(row_of(table.q, s), cfg.epsilon, rng);
      const auto [z, r] = env.step(a);
      const std::size_t s_next = discretize(z, table.grid);
      q_update(table.q, s, a, r, s_next, cfg.alpha, cfg.gamma);
      cumulative += r;
      s = s_next;
    }
    if (reward_curve != nullptr) {
      (*reward_curve)[static_cast<std::size_t>(episode)] = cumulative;
    }
  }
  return table;
}

double final_plateau(std::span<const double> curve, std::size_t window) {
  if (curve.empty()) {
    throw std::invalid_argument("empty reward curve");
  }
  const std::size_t n = std::min(window, curve.size());
  return std::accumulate(curve.end() - static_cast<std::ptrdiff_t>(n), curve.end(), 0.0) / static_cast<double>(n);
}

std::vector<double> mean_curve(const std::vector<std::vector<double>>& curves) {
  if (curves.empty()) {
    throw std::invalid_argument("no reward curves");
  }
  std::vector<double> mean(curves.front().size(), 0.0);
  for (const auto& c : curves) {
    if (c.size() != mean.size()) {
      throw std::invalid_argument("reward curves differ in length");
    }
    for (std::size_t e = 0; e < c.size(); ++e) {
      mean[e] += c[e] / static_cast<double>(curves.size());
    }
  }
  return mean;
}

std::size_t convergence_episode(std::span<const double> curve, double tolerance, std::size_t plateau_window) {
  const double plateau = final_plateau(curve, plateau_window);
  const double threshold = plateau - tolerance * std::abs(plateau);
  const auto it = std::find_if(curve.begin(), curve.end(), [&](double v) { return v >= threshold; });
  return static_cast<std::size_t>(it - curve.begin());
}

TrainingResult train(const Setup& setup, const TrainOptions& options) {
  setup.model.validate();
  setup.experiment.validate();
  const auto trials = static_cast<std::size_t>(setup.experiment.n_trials);

  std::vector<PolicyTable> tables(trials);
  TrainingResult result;
  result.reward_curves.resize(trials);
  parallel_for_index(trials, options.jobs, [&](std::size_t t) {
    tables[t] = train_trial(setup, t, &result.reward_curves[t]);
    if (options.on_trial_done) {
      options.on_trial_done(t);
    }
  });

  result.final_means.reserve(trials);
  for (const auto& curve : result.reward_curves) {
    result.final_means.push_back(final_plateau(curve));
  }
  // First maximum wins, so the choice is independent of thread timing.
  result.selected_trial = static_cast<std::size_t>(
      std::max_element(result.final_means.begin(), result.final_means.end()) - result.final_means.begin());
  result.policy = std::move(tables[result.selected_trial]);
  return result;
}

}  // namespace toggle
