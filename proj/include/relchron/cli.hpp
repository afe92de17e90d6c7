#pragma once

// Command-line front end: JSON run configuration, CSV/JSON writers and the
// `run`, `sweep` and `check` subcommands.

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relchron/pipeline.hpp"

namespace relchron::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalid = 2;

inline constexpr const char* kTimePointsEnv = "RELCHRON_TIME_POINTS";

enum class Emit { Populations, BFunction, PotentialTrace, Diagnostics };

struct RunConfig {
    spin::SpinScenarioConfig scenario;
    std::filesystem::path output_dir;
    std::vector<double> g_sweep;
    std::set<Emit> emit{Emit::Populations, Emit::Diagnostics};
    /// Widths for the B(t) table; defaults to scenario.a.
    std::vector<double> b_widths;
};

/// Throws Error(ConfigInvalid) on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(const nlohmann::json& j);

/// Reads and parses a config file, then applies RELCHRON_TIME_POINTS.
/// Throws Error(IoError) if the file cannot be read.
RunConfig load_run_config(const std::filesystem::path& path);

/// Header `t,p_up,p_down,norm_N`, 17 significant digits.
void emit_csv(const RelationalTrajectory& traj, const std::filesystem::path& path);

nlohmann::json report_to_json(const ComparisonReport& r);

/// Writes every requested output for `cfg` into cfg.output_dir.
void execute(const RunConfig& cfg);

int run_command(const std::filesystem::path& config, const std::optional<std::filesystem::path>& out);
int sweep_command(const std::filesystem::path& config, const std::vector<double>& gs,
                  const std::optional<std::filesystem::path>& out);
int check_command(const std::filesystem::path& config);

int main_entry(int argc, char** argv);

}  // namespace relchron::cli
