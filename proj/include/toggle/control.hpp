#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "toggle/agent.hpp"
#include "toggle/dynamics.hpp"
#include "toggle/params.hpp"
#include "toggle/stochastic.hpp"

namespace toggle {

enum class ModelKind { kReduced, kFullDeterministic, kFullStochastic };

/// "reduced", "det", "stoch".
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// One closed-loop run sampled every log interval. Row i holds the state at
/// t[i] and the input applied from t[i] on (the last row repeats the final
/// input). For the reduced model, x carries the equivalent full state
/// (proteins from z, mRNA at quasi-steady state, v == u) and z is exact.
struct EpisodeTrace {
  ModelKind model = ModelKind::kReduced;
  std::uint64_t seed = 0;
  std::size_t realization = 0;
  std::string policy_id;

  std::vector<double> t;
  std::vector<FullState> x;
  std::vector<ReducedState> z;
  std::vector<double> phi;
  std::vector<double> u1;
  std::vector<double> u2;
  std::vector<double> reward;

  std::size_t size() const { return t.size(); }
};

/// Full-model start matching the training start z0: proteins from z0, mRNA
/// at quasi-steady state, no intracellular inducer.
FullState default_initial_state(const Setup& setup);

/// Applies `policy` greedily (epsilon = 0) every control period. `x0` is a
/// full state; the reduced model starts from its projection.
EpisodeTrace run_closed_loop(ModelKind model, const PolicyTable& policy, const FullState& x0, double horizon,
                             const Setup& setup, Rng& rng);

struct CampaignSummary {
  std::vector<double> t;
  std::vector<FullState> mean;
  std::vector<FullState> stddev;  // population standard deviation
  std::vector<double> phi_mean;
  std::vector<double> phi_stddev;
};

struct Campaign {
  std::vector<EpisodeTrace> traces;
  CampaignSummary summary;
};

/// Independent realizations from default_initial_state. Realization r of the
/// stochastic model uses stream (seed, validation, r); deterministic models
/// use stream index 0 for every realization, so their campaigns do not
/// depend on n.
Campaign run_campaign(ModelKind model, const PolicyTable& policy, std::size_t n_realizations, const Setup& setup,
                      std::uint64_t seed, unsigned jobs = 1);

CampaignSummary summarize(const std::vector<EpisodeTrace>& traces);

/// Columns: t,x1,x2,x3,x4,v1,v2,phi,u1,u2,reward.
void write_trace_csv(const EpisodeTrace& trace, const std::filesystem::path& path);

/// Columns: t, then mean_<c> and std_<c> for c in x1..x4,v1,v2,phi.
void write_summary_csv(const CampaignSummary& summary, const std::filesystem::path& path);

}  // namespace toggle
