#pragma once

// Run configuration, the solve driver and CSV/manifest serialization.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "atmos/atmosphere.hpp"
#include "atmos/error.hpp"
#include "atmos/solver.hpp"

namespace atmos {

enum class MethodChoice { Tau, Collocation, Both };

inline constexpr double kMaxGridCells = 1e7;

struct SolveConfig {
    std::string env_path;           // empty when a preset supplies the environment
    std::optional<Preset> preset;
    MethodChoice method = MethodChoice::Both;
    double frequency_hz = 100.0;
    double zs = 5.0;
    int n = 1500;
    std::optional<double> vp_min;
    std::optional<double> vp_max;
    double r_min = 10.0;
    double r_max = 5000.0;
    double dr = 10.0;
    std::optional<double> z_max;    // defaults to h
    double dz = 2.0;
    double receiver_z = 1.0;
    double p0 = 1.0;
    int mode_columns = 6;
    std::filesystem::path out_dir;
};

/// Preset defaults: environment, phase-velocity window and maximum range.
[[nodiscard]] SolveConfig preset_config(Preset preset);

/// Environment text the run will use (file contents or preset table).
[[nodiscard]] std::string load_env_text(const SolveConfig& cfg);

/// Throws Config on any violated constraint.
void validate_config(const SolveConfig& cfg, const AtmosphereEnv& env);

[[nodiscard]] std::vector<double> range_grid(const SolveConfig& cfg);
[[nodiscard]] std::vector<double> height_grid(const SolveConfig& cfg, const AtmosphereEnv& env);

struct MethodRun {
    ModalSolution solution;
    FieldGrid grid;  // ranges x heights over [0, z_max]
    FieldGrid line;  // ranges x {receiver_z}
    double total_s = 0.0;
};

[[nodiscard]] MethodRun run_method(const AtmosphereEnv& env, const SolveConfig& cfg, Method method);

struct RunSummary {
    std::vector<MethodRun> runs;
    std::optional<double> max_abs_dtl_line;
};

/// Full pipeline; writes the CSV family under cfg.out_dir (per-method
/// subdirectories plus diff_summary when both methods run). Output appears
/// atomically: on failure nothing is left behind.
RunSummary run_solve(const SolveConfig& cfg);

/// wavenumbers.csv, modes.csv, tl_grid.csv, tl_line.csv, timings.csv, run_manifest.
void write_csv_family(const MethodRun& run, const SolveConfig& cfg, const AtmosphereEnv& env,
                      const std::string& env_text,
                      const std::filesystem::path& dir);

/// %.17g formatting.
[[nodiscard]] std::string format_number(double v);

[[nodiscard]] std::string sha256_hex(const std::string& data);

/// 2 config, 3 parse, 4 numeric, 1 anything else.
[[nodiscard]] int exit_code_for(ErrorKind kind) noexcept;

}  // namespace atmos
