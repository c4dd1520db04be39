#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toggle/control.hpp"

namespace toggle {

/// Set point of the full models in protein units (a.u.).
inline const Eigen::Vector2d kFullReference{750.0, 300.0};

/// Windowed mean (1/t_w) * integral_{t - t_w}^{t} x by the trapezoidal rule on
/// a uniform grid of spacing dt. Element j corresponds to sample index
/// w + j with w = t_w / dt, i.e. the output starts at t = t_w.
std::vector<double> moving_average(std::span<const double> series, double dt, double t_w);

/// Euclidean norm of the relative errors of the two averaged outputs.
std::vector<double> error_norm(std::span<const double> avg3, std::span<const double> avg4,
                               const Eigen::Vector2d& ref);

/// Integral of e^2 over [t0, t0 + (n - 1) dt] (trapezoidal).
double compute_ise(std::span<const double> e, double t0, double dt);

/// Integral of t |e| over the same range.
double compute_itae(std::span<const double> e, double t0, double dt);

struct MetricsReport {
  double ise = 0.0;
  double itae = 0.0;
  std::vector<double> error;  // e-bar sampled from t0 to horizon
  double t_w = 0.0;
  double t0 = 0.0;
  double horizon = 0.0;
  Eigen::Vector2d reference = Eigen::Vector2d::Zero();
};

/// Metrics of one trace: z-space against z_ref for the reduced model,
/// (x3, x4) against `full_reference` (default kFullReference) for the full
/// models.
MetricsReport evaluate_trace(const EpisodeTrace& trace, const Setup& setup,
                             std::optional<Eigen::Vector2d> full_reference = std::nullopt);

struct CampaignMetrics {
  std::vector<MetricsReport> per_realization;
  double mean_ise = 0.0;
  double mean_itae = 0.0;
  MetricsReport of_mean_trajectory;
};

CampaignMetrics evaluate_campaign(const Campaign& campaign, const Setup& setup);

/// Published performance figures used for comparison only; none of these
/// controllers are simulated here.
struct BaselineEntry {
  const char* controller;  // "QL (quasi-steady state)", "QL (complete model)", "MPC", "PI-PWM"
  double det_ise;
  double det_itae;
  double stoch_ise;
  double stoch_itae;
};

std::span<const BaselineEntry> published_baselines();

/// A measured ISE/ITAE pair for one (model kind) validation run.
struct MeasuredRun {
  ModelKind model = ModelKind::kFullDeterministic;
  double ise = 0.0;
  double itae = 0.0;
  std::string label;
};

/// Plain-text comparison table: one block per experiment type
/// (deterministic, stochastic), rows ISE/ITAE, columns this run, published
/// QL, MPC and PI-PWM. Reduced-model runs are compared with the published
/// quasi-steady-state QL figures.
std::string format_comparison_table(std::span<const MeasuredRun> runs);

/// Same content as CSV:
/// experiment,model,metric,run,this_run,published_ql,published_mpc,published_pi_pwm.
std::string format_comparison_csv(std::span<const MeasuredRun> runs);

}  // namespace toggle
