#include "toggle/control.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "toggle/integrate.hpp"
#include "toggle/parallel.hpp"

namespace toggle {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kReduced:
      return "reduced";
    case ModelKind::kFullDeterministic:
      return "det";
    case ModelKind::kFullStochastic:
      return "stoch";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "reduced") return ModelKind::kReduced;
  if (name == "det") return ModelKind::kFullDeterministic;
  if (name == "stoch") return ModelKind::kFullStochastic;
  throw std::invalid_argument("unknown model kind '" + name + "' (expected reduced, det or stoch)");
}

FullState default_initial_state(const Setup& setup) {
  return reduced_to_full(setup.experiment.z0, Eigen::Vector2d::Zero(), setup.model);
}

namespace {

// Advances one plant by a log interval under a held action.
class Plant {
public:
  Plant(ModelKind kind, const FullState& x0, const Setup& setup, Rng& rng)
      : kind_(kind), setup_(setup), env_(setup), rng_(rng), x_(x0) {
    if (kind_ == ModelKind::kReduced) {
      env_.reset(full_to_reduced(x0, setup.model));
    }
  }

  ReducedState observe() const {
    return kind_ == ModelKind::kReduced ? env_.state() : full_to_reduced(x_, setup_.model);
  }

  FullState full_state(const InputPair& u) const {
    if (kind_ == ModelKind::kReduced) {
      return reduced_to_full(env_.state(), Eigen::Vector2d(u.u1, u.u2), setup_.model);
    }
    return x_;
  }

  void advance(std::size_t action, const InputPair& u, double duration) {
    const ModelParams& p = setup_.model;
    const double dt = setup_.experiment.dt;
    switch (kind_) {
      case ModelKind::kReduced:
        env_.advance(action, duration);
        break;
      case ModelKind::kFullDeterministic: {
        const auto rhs = [&](const FullState& s) { return full_rhs_kernel<double>(s, u, p); };
        x_ = integrate_hold(rhs, x_, duration, IntegratorSpec{Method::kRk4, dt});
        break;
      }
      case ModelKind::kFullStochastic: {
        const long n = step_count(duration, dt);
        for (long i = 0; i < n; ++i) {
          x_ = em_step(x_, u, dt, rng_, p);
        }
        break;
      }
    }
  }

private:
  ModelKind kind_;
  const Setup& setup_;
  ReducedToggleEnv env_;
  Rng& rng_;
  FullState x_;
};

}  // namespace

EpisodeTrace run_closed_loop(ModelKind model, const PolicyTable& policy, const FullState& x0, double horizon,
                             const Setup& setup, Rng& rng) {
  const ExperimentConfig& cfg = setup.experiment;
  check_compatible(policy, make_state_grid(cfg.z_ref), make_action_spec(cfg.u1_max, cfg.u2_max));
  require_valid(x0);
  const long decisions = step_count(horizon, cfg.control_period);
  const long logs_per_decision = step_count(cfg.control_period, cfg.log_interval);

  EpisodeTrace trace;
  trace.model = model;
  trace.seed = policy.seed;
  trace.policy_id = "seed=" + std::to_string(policy.seed) + ",trial=" + std::to_string(policy.trial) +
                    ",episodes=" + std::to_string(policy.episodes);
  const auto rows = static_cast<std::size_t>(decisions * logs_per_decision + 1);
  trace.t.reserve(rows);
  trace.x.reserve(rows);
  trace.z.reserve(rows);

  Plant plant(model, x0, setup, rng);
  const auto record = [&](double t, double phi, const InputPair& u) {
    const ReducedState z = plant.observe();
    trace.t.push_back(t);
    trace.x.push_back(plant.full_state(u));
    trace.z.push_back(z);
    trace.phi.push_back(phi);
    trace.u1.push_back(u.u1);
    trace.u2.push_back(u.u2);
    trace.reward.push_back(reward(z, cfg.z_ref));
  };

  double phi = 0.0;
  InputPair u;
  for (long k = 0; k < decisions; ++k) {
    const std::size_t s = discretize(plant.observe(), policy.grid);
    const std::size_t a = select_action(row_of(policy.q, s), 0.0, rng);
    phi = policy.actions.phi_levels[a];
    u = action_to_inputs(a, policy.actions);
    for (long j = 0; j < logs_per_decision; ++j) {
      const double t = static_cast<double>(k * logs_per_decision + j) * cfg.log_interval;
      record(t, phi, u);
      plant.advance(a, u, cfg.log_interval);
    }
  }
  record(static_cast<double>(decisions * logs_per_decision) * cfg.log_interval, phi, u);
  return trace;
}

CampaignSummary summarize(const std::vector<EpisodeTrace>& traces) {
  if (traces.empty()) {
    throw std::invalid_argument("cannot summarize an empty campaign");
  }
  const std::size_t rows = traces.front().size();
  for (const auto& tr : traces) {
    if (tr.size() != rows) {
      throw std::invalid_argument("campaign traces have different lengths");
    }
  }
  const double n = static_cast<double>(traces.size());
  CampaignSummary s;
  s.t = traces.front().t;
  s.mean.assign(rows, FullState::Zero());
  s.stddev.assign(rows, FullState::Zero());
  s.phi_mean.assign(rows, 0.0);
  s.phi_stddev.assign(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (const auto& tr : traces) {
      s.mean[i] += tr.x[i];
      s.phi_mean[i] += tr.phi[i];
    }
    s.mean[i] /= n;
    s.phi_mean[i] /= n;
    FullState var = FullState::Zero();
    double phi_var = 0.0;
    for (const auto& tr : traces) {
      var += (tr.x[i] - s.mean[i]).cwiseAbs2();
      phi_var += (tr.phi[i] - s.phi_mean[i]) * (tr.phi[i] - s.phi_mean[i]);
    }
    s.stddev[i] = (var / n).cwiseSqrt();
    s.phi_stddev[i] = std::sqrt(phi_var / n);
  }
  return s;
}

Campaign run_campaign(ModelKind model, const PolicyTable& policy, std::size_t n_realizations, const Setup& setup,
                      std::uint64_t seed, unsigned jobs) {
  if (n_realizations < 1) {
    throw std::invalid_argument("a campaign needs at least one realization");
  }
  Campaign campaign;
  campaign.traces.resize(n_realizations);
  const FullState x0 = default_initial_state(setup);
  parallel_for_index(n_realizations, jobs, [&](std::size_t r) {
    const std::uint64_t stream = model == ModelKind::kFullStochastic ? r : 0;
    Rng rng = make_rng(seed, Stream::kValidation, stream);
    EpisodeTrace trace = run_closed_loop(model, policy, x0, setup.experiment.horizon, setup, rng);
    trace.seed = seed;
    trace.realization = r;
    campaign.traces[r] = std::move(trace);
  });
  campaign.summary = summarize(campaign.traces);
  return campaign;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return out;
}

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

void write_trace_csv(const EpisodeTrace& trace, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "t,x1,x2,x3,x4,v1,v2,phi,u1,u2,reward\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    put(out, trace.t[i]);
    for (int c = 0; c < 6; ++c) {
      out << ',';
      put(out, trace.x[i][c]);
    }
    for (double v : {trace.phi[i], trace.u1[i], trace.u2[i], trace.reward[i]}) {
      out << ',';
      put(out, v);
    }
    out << '\n';
  }
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

void write_summary_csv(const CampaignSummary& summary, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "t";
  for (const char* c : {"x1", "x2", "x3", "x4", "v1", "v2", "phi"}) {
    out << ",mean_" << c << ",std_" << c;
  }
  out << '\n';
  for (std::size_t i = 0; i < summary.t.size(); ++i) {
    put(out, summary.t[i]);
    for (int c = 0; c < 6; ++c) {
      out << ',';
      put(out, summary.mean[i][c]);
      out << ',';
      put(out, summary.stddev[i][c]);
    }
    out << ',';
    put(out, summary.phi_mean[i]);
    out << ',';
    put(out, summary.phi_stddev[i]);
    out << '\n';
  }
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

}  // namespace toggle
