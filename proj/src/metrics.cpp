#include "toggle/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "toggle/integrate.hpp"

namespace toggle {

std::vector<double> moving_average(std::span<const double> series, double dt, double t_w) {
  const long w = step_count(t_w, dt);
  const auto n = static_cast<long>(series.size());
  if (n <= w) {
    throw std::invalid_argument("series is shorter than the moving-average window");
  }
  // Cumulative trapezoidal integral; window integrals are differences.
  std::vector<double> cumulative(static_cast<std::size_t>(n), 0.0);
  for (long i = 1; i < n; ++i) {
    cumulative[i] = cumulative[i - 1] + 0.5 * dt * (series[i - 1] + series[i]);
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n - w));
  for (long i = w; i < n; ++i) {
    out.push_back((cumulative[i] - cumulative[i - w]) / t_w);
  }
  return out;
}

std::vector<double> error_norm(std::span<const double> avg3, std::span<const double> avg4,
                               const Eigen::Vector2d& ref) {
  if (avg3.size() != avg4.size()) {
    throw std::invalid_argument("averaged series differ in length");
  }
  if (!(ref[0] > 0.0 && ref[1] > 0.0)) {
    throw std::invalid_argument("reference must be positive");
  }
  std::vector<double> e(avg3.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = std::hypot((avg3[i] - ref[0]) / ref[0], (avg4[i] - ref[1]) / ref[1]);
  }
  return e;
}

namespace {

template <typename F>
double trapezoid(std::span<const double> e, double t0, double dt, F integrand) {
  if (e.size() < 2) {
    throw std::invalid_argument("integration range is empty");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    const double ta = t0 + static_cast<double>(i) * dt;
    const double tb = t0 + static_cast<double>(i + 1) * dt;
    sum += 0.5 * dt * (integrand(ta, e[i]) + integrand(tb, e[i + 1]));
  }
  return sum;
}

}  // namespace

double compute_ise(std::span<const double> e, double t0, double dt) {
  return trapezoid(e, t0, dt, [](double, double v) { return v * v; });
}

double compute_itae(std::span<const double> e, double t0, double dt) {
  return trapezoid(e, t0, dt, [](double t, double v) { return t * std::abs(v); });
}

namespace {

MetricsReport metrics_of(std::span<const double> a, std::span<const double> b, const Eigen::Vector2d& ref,
                         double dt, double t_w, double horizon) {
  MetricsReport r;
  r.t_w = t_w;
  r.t0 = t_w;
  r.horizon = horizon;
  r.reference = ref;
  r.error = error_norm(moving_average(a, dt, t_w), moving_average(b, dt, t_w), ref);
  r.ise = compute_ise(r.error, r.t0, dt);
  r.itae = compute_itae(r.error, r.t0, dt);
  return r;
}

struct Outputs {
  std::vector<double> a;
  std::vector<double> b;
  Eigen::Vector2d ref;
};

Outputs outputs_of(const EpisodeTrace& trace, const Setup& setup, const Eigen::Vector2d& full_reference) {
  Outputs o;
  o.a.reserve(trace.size());
  o.b.reserve(trace.size());
  if (trace.model == ModelKind::kReduced) {
    for (const auto& z : trace.z) {
      o.a.push_back(z[0]);
      o.b.push_back(z[1]);
    }
    o.ref = setup.experiment.z_ref;
  } else {
    for (const auto& x : trace.x) {
      o.a.push_back(x[kX3]);
      o.b.push_back(x[kX4]);
    }
    o.ref = full_reference;
  }
  return o;
}

double sample_period(const EpisodeTrace& trace) {
  if (trace.size() < 2) {
    throw std::invalid_argument("trace too short for metrics");
  }
  return trace.t[1] - trace.t[0];
}

}  // namespace

MetricsReport evaluate_trace(const EpisodeTrace& trace, const Setup& setup,
                             std::optional<Eigen::Vector2d> full_reference) {
  const Outputs o = outputs_of(trace, setup, full_reference.value_or(kFullReference));
  return metrics_of(o.a, o.b, o.ref, sample_period(trace), setup.experiment.t_w, trace.t.back());
}

CampaignMetrics evaluate_campaign(const Campaign& campaign, const Setup& setup) {
  CampaignMetrics m;
  for (const auto& trace : campaign.traces) {
    m.per_realization.push_back(evaluate_trace(trace, setup));
  }
  const double n = static_cast<double>(m.per_realization.size());
  for (const auto& r : m.per_realization) {
    m.mean_ise += r.ise / n;
    m.mean_itae += r.itae / n;
  }
  // Metrics of the pointwise mean trajectory.
  const EpisodeTrace& first = campaign.traces.front();
  std::vector<double> a(first.size(), 0.0);
  std::vector<double> b(first.size(), 0.0);
  for (const auto& trace : campaign.traces) {
    const Outputs o = outputs_of(trace, setup, kFullReference);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] += o.a[i] / n;
      b[i] += o.b[i] / n;
    }
  }
  const Eigen::Vector2d ref = first.model == ModelKind::kReduced ? setup.experiment.z_ref : kFullReference;
  m.of_mean_trajectory = metrics_of(a, b, ref, sample_period(first), setup.experiment.t_w, first.t.back());
  return m;
}

std::span<const BaselineEntry> published_baselines() {
  static constexpr BaselineEntry kTable[] = {
      {"QL (quasi-steady state)", 113.23, 1.51e6, 116.86, 1.53e6},
      {"QL (complete model)", 767.04, 3.96e6, 794.64, 4.07e6},
      {"MPC", 47.58, 0.81e6, 178.50, 1.98e6},
      {"PI-PWM", 876.71, 2.07e6, 830.52, 2.07e6},
  };
  return kTable;
}

namespace {

struct Row {
  std::string experiment;
  std::string model;
  std::string metric;
  std::string label;
  double measured;
  double published_ql;
  std::optional<double> mpc;
  std::optional<double> pi_pwm;
};

std::vector<Row> comparison_rows(std::span<const MeasuredRun> runs) {
  const auto base = published_baselines();
  const BaselineEntry& ql_qss = base[0];
  const BaselineEntry& ql_full = base[1];
  const BaselineEntry& mpc = base[2];
  const BaselineEntry& pwm = base[3];
  std::vector<Row> rows;
  // Order: complete-model deterministic, complete-model stochastic, reduced.
  for (ModelKind kind : {ModelKind::kFullDeterministic, ModelKind::kFullStochastic, ModelKind::kReduced}) {
    for (const auto& run : runs) {
      if (run.model != kind) {
        continue;
      }
      if (kind == ModelKind::kReduced) {
        rows.push_back({"deterministic", "quasi-steady state", "ISE", run.label, run.ise, ql_qss.det_ise, {}, {}});
        rows.push_back({"deterministic", "quasi-steady state", "ITAE", run.label, run.itae, ql_qss.det_itae, {}, {}});
      } else {
        const bool det = kind == ModelKind::kFullDeterministic;
        const std::string exp = det ? "deterministic" : "stochastic";
        rows.push_back({exp, "complete model", "ISE", run.label, run.ise, det ? ql_full.det_ise : ql_full.stoch_ise,
                        det ? mpc.det_ise : mpc.stoch_ise, det ? pwm.det_ise : pwm.stoch_ise});
        rows.push_back({exp, "complete model", "ITAE", run.label, run.itae,
                        det ? ql_full.det_itae : ql_full.stoch_itae, det ? mpc.det_itae : mpc.stoch_itae,
                        det ? pwm.det_itae : pwm.stoch_itae});
      }
    }
  }
  return rows;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, v >= 1e5 ? "%.3e" : "%.2f", v);
  return buf;
}

std::string num_or_dash(const std::optional<double>& v) { return v ? num(*v) : "-"; }

std::string full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_comparison_table(std::span<const MeasuredRun> runs) {
  const auto rows = comparison_rows(runs);
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-14s %-19s %-5s %-16s %14s %14s %14s %16s\n", "experiment", "model", "metric",
                "run", "this run (QL)", "published QL", "published MPC", "published PI-PWM");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-14s %-19s %-5s %-16s %14s %14s %14s %16s\n", r.experiment.c_str(),
                  r.model.c_str(), r.metric.c_str(), r.label.c_str(), num(r.measured).c_str(),
                  num(r.published_ql).c_str(), num_or_dash(r.mpc).c_str(), num_or_dash(r.pi_pwm).c_str());
    out << line;
  }
  out << "MPC and PI-PWM columns are published reference values; those controllers are not simulated.\n";
  return out.str();
}

std::string format_comparison_csv(std::span<const MeasuredRun> runs) {
  std::ostringstream out;
  out << "experiment,model,metric,run,this_run,published_ql,published_mpc,published_pi_pwm\n";
  for (const auto& r : comparison_rows(runs)) {
    out << r.experiment << ',' << r.model << ',' << r.metric << ',' << r.label << ',' << full(r.measured) << ','
        << full(r.published_ql) << ',' << (r.mpc ? full(*r.mpc) : "") << ',' << (r.pi_pwm ? full(*r.pi_pwm) : "")
        << '\n';
  }
  return out.str();
}

}  // namespace toggle
