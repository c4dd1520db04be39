#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "toggle/params.hpp"

namespace toggle::cli {

/// Flags shared by the subcommands. Unset optionals leave the config value
/// alone; precedence is flag > config file (and TOGGLE_SEED) > defaults.
struct CommonFlags {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;  // 0 = all available cores
  std::optional<double> dt;
  std::optional<double> t_w;
};

struct TrainFlags {
  CommonFlags common;
  std::optional<int> episodes;
  std::optional<int> trials;
};

struct ValidateFlags {
  CommonFlags common;
  std::filesystem::path policy;
  std::string model = "det";
  std::optional<int> realizations;
};

struct ReportFlags {
  std::vector<std::filesystem::path> run_dirs;
  std::optional<std::filesystem::path> out;
};

/// Files written by a command, relative to its output directory.
struct RunManifest {
  std::filesystem::path path;
  std::vector<std::string> artifacts;
};

Setup resolve_setup(const CommonFlags& flags);

RunManifest cmd_train(const TrainFlags& flags);
RunManifest cmd_validate(const ValidateFlags& flags);

/// Returns the rendered comparison table.
std::string cmd_report(const ReportFlags& flags);

int run(int argc, char** argv);

}  // namespace toggle::cli
