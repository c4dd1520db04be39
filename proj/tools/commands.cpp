#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "toggle/agent.hpp"
#include "toggle/control.hpp"
#include "toggle/metrics.hpp"
#include "toggle/parallel.hpp"

namespace toggle::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestName = "manifest.json";
constexpr int kManifestVersion = 1;

unsigned resolve_jobs(unsigned jobs) { return jobs == 0 ? default_jobs() : jobs; }

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes the manifest last and checks that every listed artifact exists.
RunManifest finish(const fs::path& out_dir, json manifest, std::vector<std::string> artifacts) {
  for (const auto& a : artifacts) {
    if (!fs::exists(out_dir / a)) {
      throw std::runtime_error("declared artifact missing after run: " + a);
    }
  }
  manifest["artifacts"] = artifacts;
  RunManifest result{out_dir / kManifestName, std::move(artifacts)};
  write_text(result.path, manifest.dump(2) + "\n");
  return result;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Setup resolve_setup(const CommonFlags& flags) {
  Setup setup;
  if (flags.config) {
    setup = load_config(*flags.config);
  } else {
    apply_environment_overrides(setup);
  }
  if (flags.seed) setup.experiment.rng_seed = *flags.seed;
  if (flags.dt) setup.experiment.dt = *flags.dt;
  if (flags.t_w) setup.experiment.t_w = *flags.t_w;
  return setup;
}

RunManifest cmd_train(const TrainFlags& flags) {
  Setup setup = resolve_setup(flags.common);
  if (flags.episodes) setup.experiment.n_episodes = *flags.episodes;
  if (flags.trials) setup.experiment.n_trials = *flags.trials;
  setup.model.validate();
  setup.experiment.validate();

  const fs::path out = flags.common.out;
  fs::create_directories(out);
  const auto start = std::chrono::steady_clock::now();
  const TrainingResult result = train(setup, TrainOptions{resolve_jobs(flags.common.jobs), {}});
  const double train_seconds = seconds_since(start);

  std::vector<std::string> artifacts;
  write_text(out / "config.txt", to_config_text(setup));
  artifacts.emplace_back("config.txt");
  save_policy(result.policy, out / "policy.txt");
  artifacts.emplace_back("policy.txt");

  for (std::size_t t = 0; t < result.reward_curves.size(); ++t) {
    const std::string name = "reward_curve_trial_" + std::to_string(t) + ".csv";
    std::ostringstream csv;
    csv << "episode,cumulative_reward\n";
    for (std::size_t e = 0; e < result.reward_curves[t].size(); ++e) {
      csv << e << ',' << full_precision(result.reward_curves[t][e]) << '\n';
    }
    write_text(out / name, csv.str());
    artifacts.push_back(name);
  }

  const std::vector<double> mean = mean_curve(result.reward_curves);
  {
    std::ostringstream csv;
    csv << "episode,mean_cumulative_reward,std_cumulative_reward\n";
    for (std::size_t e = 0; e < mean.size(); ++e) {
      double var = 0.0;
      for (const auto& c : result.reward_curves) {
        var += (c[e] - mean[e]) * (c[e] - mean[e]);
      }
      var /= static_cast<double>(result.reward_curves.size());
      csv << e << ',' << full_precision(mean[e]) << ',' << full_precision(std::sqrt(var)) << '\n';
    }
    write_text(out / "reward_curve_mean.csv", csv.str());
    artifacts.emplace_back("reward_curve_mean.csv");
  }

  const double plateau = final_plateau(mean);
  const std::size_t converged = convergence_episode(mean);
  std::printf("trained %d trial(s) x %d episode(s) in %.1f s\n", setup.experiment.n_trials,
              setup.experiment.n_episodes, train_seconds);
  std::printf("mean cumulative reward plateau (last %zu episodes): %.3f\n",
              std::min<std::size_t>(1000, mean.size()), plateau);
  if (converged < mean.size()) {
    std::printf("mean curve within 5%% of plateau from episode %zu\n", converged + 1);
  } else {
    std::printf("mean curve never came within 5%% of plateau\n");
  }
  std::printf("selected trial %zu (final mean %.3f) -> %s\n", result.selected_trial,
              result.final_means[result.selected_trial], (out / "policy.txt").string().c_str());

  json manifest;
  manifest["manifest_version"] = kManifestVersion;
  manifest["command"] = "train";
  manifest["config"] = to_config_text(setup);
  manifest["seeds"] = {{"rng_seed", setup.experiment.rng_seed}, {"stream", "training"}};
  manifest["training"] = {{"selected_trial", result.selected_trial},
                          {"final_means", result.final_means},
                          {"plateau", plateau},
                          {"convergence_episode", converged + 1}};
  manifest["timings"] = {{"train_seconds", train_seconds}};
  return finish(out, std::move(manifest), std::move(artifacts));
}

RunManifest cmd_validate(const ValidateFlags& flags) {
  Setup setup = resolve_setup(flags.common);
  setup.model.validate();
  setup.experiment.validate();
  const ModelKind model = parse_model_kind(flags.model);
  const int realizations =
      flags.realizations.value_or(model == ModelKind::kFullStochastic ? setup.experiment.n_realizations : 1);
  if (realizations < 1) {
    throw std::invalid_argument("--realizations must be >= 1");
  }
  const PolicyTable policy = load_policy(flags.policy);
  check_compatible(policy, make_state_grid(setup.experiment.z_ref),
                   make_action_spec(setup.experiment.u1_max, setup.experiment.u2_max));

  const fs::path out = flags.common.out;
  fs::create_directories(out);
  const auto start = std::chrono::steady_clock::now();
  const Campaign campaign = run_campaign(model, policy, static_cast<std::size_t>(realizations), setup,
                                         setup.experiment.rng_seed, resolve_jobs(flags.common.jobs));
  const double sim_seconds = seconds_since(start);
  const CampaignMetrics metrics = evaluate_campaign(campaign, setup);

  const std::string tag = to_string(model);
  std::vector<std::string> artifacts;
  write_text(out / "config.txt", to_config_text(setup));
  artifacts.emplace_back("config.txt");
  for (const auto& trace : campaign.traces) {
    const std::string name = "trace_" + tag + "_" + std::to_string(trace.realization) + ".csv";
    write_trace_csv(trace, out / name);
    artifacts.push_back(name);
  }
  write_summary_csv(campaign.summary, out / ("summary_" + tag + ".csv"));
  artifacts.push_back("summary_" + tag + ".csv");

  {
    std::ostringstream csv;
    csv << "realization,ise,itae\n";
    for (std::size_t r = 0; r < metrics.per_realization.size(); ++r) {
      csv << r << ',' << full_precision(metrics.per_realization[r].ise) << ','
          << full_precision(metrics.per_realization[r].itae) << '\n';
    }
    csv << "mean_over_realizations," << full_precision(metrics.mean_ise) << ',' << full_precision(metrics.mean_itae)
        << '\n';
    csv << "mean_trajectory," << full_precision(metrics.of_mean_trajectory.ise) << ','
        << full_precision(metrics.of_mean_trajectory.itae) << '\n';
    write_text(out / ("metrics_" + tag + ".csv"), csv.str());
    artifacts.push_back("metrics_" + tag + ".csv");
  }

  std::printf("model %s, %d realization(s), t_w = %g min\n", tag.c_str(), realizations, setup.experiment.t_w);
  std::printf("ISE  mean over realizations %.2f, of mean trajectory %.2f\n", metrics.mean_ise,
              metrics.of_mean_trajectory.ise);
  std::printf("ITAE mean over realizations %.4g, of mean trajectory %.4g\n", metrics.mean_itae,
              metrics.of_mean_trajectory.itae);

  json per = json::array();
  for (const auto& m : metrics.per_realization) {
    per.push_back({{"ise", m.ise}, {"itae", m.itae}});
  }
  json manifest;
  manifest["manifest_version"] = kManifestVersion;
  manifest["command"] = "validate";
  manifest["model"] = tag;
  manifest["policy"] = fs::absolute(flags.policy).string();
  manifest["config"] = to_config_text(setup);
  manifest["seeds"] = {{"rng_seed", setup.experiment.rng_seed},
                       {"stream", "validation"},
                       {"realizations", realizations}};
  manifest["metrics"] = {{"per_realization", per},
                         {"mean_ise", metrics.mean_ise},
                         {"mean_itae", metrics.mean_itae},
                         {"mean_trajectory_ise", metrics.of_mean_trajectory.ise},
                         {"mean_trajectory_itae", metrics.of_mean_trajectory.itae},
                         {"t_w", setup.experiment.t_w}};
  manifest["timings"] = {{"simulate_seconds", sim_seconds}};
  return finish(out, std::move(manifest), std::move(artifacts));
}

std::string cmd_report(const ReportFlags& flags) {
  if (flags.run_dirs.empty()) {
    throw CLI::ValidationError("report", "at least one run directory is required");
  }
  std::vector<MeasuredRun> runs;
  for (const auto& dir : flags.run_dirs) {
    const fs::path path = dir / kManifestName;
    json manifest;
    try {
      manifest = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
      throw std::runtime_error("malformed manifest " + path.string() + ": " + e.what());
    }
    if (manifest.value("command", "") != "validate") {
      throw std::runtime_error(path.string() + " is not a validate manifest");
    }
    try {
      const auto& m = manifest.at("metrics");
      runs.push_back({parse_model_kind(manifest.at("model").get<std::string>()), m.at("mean_ise").get<double>(),
                      m.at("mean_itae").get<double>(), dir.filename().string()});
    } catch (const json::exception& e) {
      throw std::runtime_error("malformed manifest " + path.string() + ": " + e.what());
    }
  }
  const std::string table = format_comparison_table(runs);
  if (flags.out) {
    fs::create_directories(*flags.out);
    write_text(*flags.out / "report.txt", table);
    write_text(*flags.out / "report.csv", format_comparison_csv(runs));
  }
  return table;
}

namespace {

void add_common(CLI::App& app, CommonFlags& flags, bool need_out) {
  app.add_option("--config", flags.config, "Config file (key = value)")->check(CLI::ExistingFile);
  auto* out = app.add_option("--out", flags.out, "Output directory");
  if (need_out) {
    out->required();
  }
  app.add_option("--seed", flags.seed, "Base RNG seed (overrides config and TOGGLE_SEED)");
  app.add_option("--jobs", flags.jobs, "Worker threads (default: all cores)");
  app.add_option("--dt", flags.dt, "Integration / Euler-Maruyama step, minutes")->check(CLI::PositiveNumber);
  app.add_option("--tw", flags.t_w, "Moving-average window, minutes")->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Q-learning control of a genetic toggle switch: train, validate, report"};
  app.require_subcommand(1);

  TrainFlags train_flags;
  auto* train_cmd = app.add_subcommand("train", "Train tabular Q-learning policies on the reduced model");
  add_common(*train_cmd, train_flags.common, true);
  train_cmd->add_option("--episodes", train_flags.episodes, "Episodes per trial")->check(CLI::PositiveNumber);
  train_cmd->add_option("--trials", train_flags.trials, "Independent training trials")->check(CLI::PositiveNumber);

  ValidateFlags validate_flags;
  auto* validate_cmd = app.add_subcommand("validate", "Run a frozen policy in closed loop and compute ISE/ITAE");
  validate_cmd->add_option("policy", validate_flags.policy, "Policy file written by train")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(*validate_cmd, validate_flags.common, true);
  validate_cmd->add_option("--model", validate_flags.model, "reduced, det or stoch")
      ->check(CLI::IsMember({"reduced", "det", "stoch"}));
  validate_cmd->add_option("--realizations", validate_flags.realizations, "Number of realizations")
      ->check(CLI::PositiveNumber);

  ReportFlags report_flags;
  auto* report_cmd = app.add_subcommand("report", "Compare validation runs with published figures");
  report_cmd->add_option("run_dirs", report_flags.run_dirs, "Directories written by validate")
      ->required()
      ->check(CLI::ExistingDirectory);
  report_cmd->add_option("--out", report_flags.out, "Write report.txt and report.csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*train_cmd) {
      cmd_train(train_flags);
    } else if (*validate_cmd) {
      cmd_validate(validate_flags);
    } else if (*report_cmd) {
      std::cout << cmd_report(report_flags);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace toggle::cli
