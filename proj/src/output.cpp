#include "atmos/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <openssl/evp.h>

#include "atmos/error.hpp"
#include "json.hpp"

namespace atmos {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::vector<double> stepped(double start, double stop, double step) {
    std::vector<double> out;
    // Index-based to avoid drift; a small slack admits the end point.
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    out.reserve(static_cast<std::size_t>(count) + 1);
    for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

class CsvWriter {
public:
    explicit CsvWriter(const fs::path& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    }
    CsvWriter& header(std::initializer_list<std::string_view> cols) {
        bool first = true;
        for (auto c : cols) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
        return *this;
    }
    void raw_line(const std::string& line) { out_ << line << '\n'; }
    void close() {
        out_.close();
        if (!out_) throw Error(ErrorKind::Io, "write failed: " + path_.string());
    }

private:
    fs::path path_;
    std::ofstream out_;
};

void append(std::string& line, double v) {
    if (!line.empty()) line.push_back(',');
    line += format_number(v);
}

ordered_json optional_json(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

const char* method_choice_name(MethodChoice m) {
    switch (m) {
        case MethodChoice::Tau: return "tau";
        case MethodChoice::Collocation: return "collocation";
        case MethodChoice::Both: return "both";
    }
    return "?";
}

ordered_json config_json(const SolveConfig& cfg, const std::string& env_text) {
    ordered_json j;
    j["env_path"] = cfg.env_path;
    j["preset"] = cfg.preset ? ordered_json(*cfg.preset == Preset::Downwind ? "downwind" : "upwind")
                             : ordered_json(nullptr);
    j["method"] = method_choice_name(cfg.method);
    j["freq_hz"] = cfg.frequency_hz;
    j["zs_m"] = cfg.zs;
    j["N"] = cfg.n;
    j["vp_min"] = optional_json(cfg.vp_min);
    j["vp_max"] = optional_json(cfg.vp_max);
    j["r_min_m"] = cfg.r_min;
    j["r_max_m"] = cfg.r_max;
    j["dr_m"] = cfg.dr;
    j["z_max_m"] = optional_json(cfg.z_max);
    j["dz_m"] = cfg.dz;
    j["receiver_z_m"] = cfg.receiver_z;
    j["p0"] = cfg.p0;
    j["mode_columns"] = cfg.mode_columns;
    j["out_dir"] = cfg.out_dir.string();
    j["env_sha256"] = sha256_hex(env_text);
    j["env_text"] = env_text;
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

/// Staging directory inside the output directory; moved into place on commit.
class StagedOutput {
public:
    explicit StagedOutput(const fs::path& out_dir) : out_dir_(out_dir) {
        std::error_code ec;
        fs::create_directories(out_dir_, ec);
        if (ec) throw Error(ErrorKind::Io, "cannot create " + out_dir_.string() + ": " + ec.message());
        staging_ = out_dir_ / (".staging-" + std::to_string(::getpid()));
        fs::remove_all(staging_, ec);
        fs::create_directories(staging_, ec);
        if (ec) throw Error(ErrorKind::Io, "cannot create " + staging_.string() + ": " + ec.message());
    }
    StagedOutput(const StagedOutput&) = delete;
    StagedOutput& operator=(const StagedOutput&) = delete;
    ~StagedOutput() {
        std::error_code ec;
        fs::remove_all(staging_, ec);
    }

    [[nodiscard]] const fs::path& path() const { return staging_; }

    void commit() {
        for (const auto& entry : fs::directory_iterator(staging_)) {
            const fs::path target = out_dir_ / entry.path().filename();
            std::error_code ec;
            fs::remove_all(target, ec);
            fs::rename(entry.path(), target, ec);
            if (ec) throw Error(ErrorKind::Io, "cannot move " + target.string() + " into place: " + ec.message());
        }
    }

private:
    fs::path out_dir_;
    fs::path staging_;
};

}  // namespace

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::Io, "sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Parse: return 3;
        case ErrorKind::InvalidTruncation:
        case ErrorKind::Dimension:
        case ErrorKind::Domain:
        case ErrorKind::SingularImpedance:
        case ErrorKind::Elimination:
        case ErrorKind::EigenSolve:
        case ErrorKind::DegenerateMode: return 4;
        case ErrorKind::Io: return 1;
    }
    return 1;
}

SolveConfig preset_config(Preset preset) {
    SolveConfig cfg;
    cfg.preset = preset;
    if (preset == Preset::Downwind) {
        cfg.vp_min = 341.7;
        cfg.vp_max = 391.2;
        cfg.r_max = 5000.0;
    } else {
        cfg.vp_max = 393.2;
        cfg.r_max = 10000.0;
    }
    return cfg;
}

std::string load_env_text(const SolveConfig& cfg) {
    if (!cfg.env_path.empty()) {
        std::ifstream in(cfg.env_path, std::ios::binary);
        if (!in) throw Error(ErrorKind::Config, "cannot read env file " + cfg.env_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    if (cfg.preset) return std::string(preset_env_text(*cfg.preset));
    throw Error(ErrorKind::Config, "no environment: give --env or --preset");
}

void validate_config(const SolveConfig& cfg, const AtmosphereEnv& env) {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, "[config] " + msg); };
    if (!(cfg.frequency_hz > 0.0)) fail("frequency must be > 0");
    if (!(cfg.zs >= 0.0 && cfg.zs <= env.top())) fail("source height must lie in [0, H]");
    if (cfg.n < 8) fail("N must be >= 8");
    if (!(cfg.r_min > 0.0)) fail("minimum range must be > 0");
    if (!(cfg.dr > 0.0)) fail("range step must be > 0");
    if (!(cfg.r_max >= cfg.r_min)) fail("maximum range must be >= minimum range");
    if (!(cfg.dz > 0.0)) fail("height step must be > 0");
    const double z_max = cfg.z_max.value_or(env.interest_height());
    if (!(z_max >= 0.0 && z_max <= env.interest_height())) fail("grid height must lie in [0, h]");
    if (!(cfg.receiver_z >= 0.0 && cfg.receiver_z <= env.interest_height())) fail("receiver height must lie in [0, h]");
    if (!(cfg.p0 > 0.0)) fail("p0 must be > 0");
    if (cfg.mode_columns < 0) fail("mode column count must be >= 0");
    if (cfg.vp_min && cfg.vp_max && *cfg.vp_min > *cfg.vp_max) fail("vp-min exceeds vp-max");
    if (cfg.out_dir.empty()) fail("output directory is required");
    const double cells = std::floor((cfg.r_max - cfg.r_min) / cfg.dr + 1.0) * std::floor(z_max / cfg.dz + 1.0);
    if (cells > kMaxGridCells) fail("TL grid exceeds 1e7 cells");
}

std::vector<double> range_grid(const SolveConfig& cfg) { return stepped(cfg.r_min, cfg.r_max, cfg.dr); }

std::vector<double> height_grid(const SolveConfig& cfg, const AtmosphereEnv& env) {
    return stepped(0.0, cfg.z_max.value_or(env.interest_height()), cfg.dz);
}

MethodRun run_method(const AtmosphereEnv& env, const SolveConfig& cfg, Method method) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveRequest req;
    req.frequency_hz = cfg.frequency_hz;
    req.n = cfg.n;
    req.method = method;
    req.vp_min = cfg.vp_min;
    req.vp_max = cfg.vp_max;
    MethodRun run{solve_modes(env, req), {}, {}, 0.0};

    const auto t1 = std::chrono::steady_clock::now();
    const auto ranges = range_grid(cfg);
    const auto heights = height_grid(cfg, env);
    try {
        run.grid = synthesize_pressure(run.solution.modes, cfg.zs, ranges, heights, cfg.p0);
        run.line = synthesize_pressure(run.solution.modes, cfg.zs, ranges,
                                       std::span<const double>(&cfg.receiver_z, 1), cfg.p0);
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("[field] ") + e.what());
    }
    const auto t2 = std::chrono::steady_clock::now();
    run.solution.timings.field_s = std::chrono::duration<double>(t2 - t1).count();
    run.total_s = std::chrono::duration<double>(t2 - t0).count();
    return run;
}

void write_csv_family(const MethodRun& run, const SolveConfig& cfg, const AtmosphereEnv& env,
                      const std::string& env_text, const fs::path& dir) {
    const auto& sol = run.solution;
    const auto& ms = sol.modes;
    {
        CsvWriter w(dir / "wavenumbers.csv");
        w.header({"m", "Re_kr", "Im_kr", "phase_velocity"});
        for (std::size_t m = 0; m < ms.size(); ++m) {
            std::string line = std::to_string(m + 1);
            append(line, ms.modes[m].kr.real());
            append(line, ms.modes[m].kr.imag());
            append(line, sol.selected[m].phase_velocity);
            w.raw_line(line);
        }
        w.close();
    }
    {
        const auto ncols = std::min<std::size_t>(static_cast<std::size_t>(cfg.mode_columns), ms.size());
        const auto heights = stepped(0.0, env.interest_height(), 1.0);
        const Eigen::MatrixXcd values = eval_modes(ms, heights);
        CsvWriter w(dir / "modes.csv");
        std::string head = "z";
        for (std::size_t m = 1; m <= ncols; ++m) {
            head += ",Re_psi" + std::to_string(m) + ",Im_psi" + std::to_string(m);
        }
        w.raw_line(head);
        for (std::size_t i = 0; i < heights.size(); ++i) {
            std::string line = format_number(heights[i]);
            for (std::size_t m = 0; m < ncols; ++m) {
                const cplx v = values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
                append(line, v.real());
                append(line, v.imag());
            }
            w.raw_line(line);
        }
        w.close();
    }
    {
        CsvWriter w(dir / "tl_grid.csv");
        w.header({"r", "z", "TL"});
        for (std::size_t i = 0; i < run.grid.ranges.size(); ++i) {
            for (std::size_t j = 0; j < run.grid.heights.size(); ++j) {
                std::string line = format_number(run.grid.ranges[i]);
                append(line, run.grid.heights[j]);
                append(line, run.grid.tl(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
                w.raw_line(line);
            }
        }
        w.close();
    }
    {
        CsvWriter w(dir / "tl_line.csv");
        w.header({"r", "TL"});
        for (std::size_t i = 0; i < run.line.ranges.size(); ++i) {
            std::string line = format_number(run.line.ranges[i]);
            append(line, run.line.tl(static_cast<Eigen::Index>(i), 0));
            w.raw_line(line);
        }
        w.close();
    }
    {
        const auto& t = sol.timings;
        CsvWriter w(dir / "timings.csv");
        w.header({"stage", "seconds"});
        w.raw_line("assemble," + format_number(t.assemble_s));
        w.raw_line("eigensolve," + format_number(t.eigensolve_s));
        w.raw_line("modes," + format_number(t.modes_s));
        w.raw_line("field," + format_number(t.field_s));
        w.raw_line("total," + format_number(run.total_s));
        w.close();
    }
    ordered_json manifest;
    manifest["config"] = config_json(cfg, env_text);
    manifest["method"] = to_string(sol.method);
    manifest["env_parsed"] = format_env(env);
    manifest["mode_count"] = ms.size();
    manifest["eigenpairs_total"] = sol.eigen_total;
    manifest["eigenpairs_failed"] = sol.eigen_failed;
    write_text(dir / "run_manifest", manifest.dump(2) + "\n");
}

namespace {

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double below = kTlCap + 1.0) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (a(i, j) < below && b(i, j) < below) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
        }
    }
    return worst;
}

}  // namespace

RunSummary run_solve(const SolveConfig& cfg) {
    const std::string env_text = load_env_text(cfg);
    const AtmosphereEnv env = [&] {
        try {
            return parse_env(env_text);
        } catch (const Error& e) {
            throw Error(e.kind(), "[parse] " + (cfg.env_path.empty() ? std::string("preset") : cfg.env_path) +
                                      ": " + e.what());
        }
    }();
    validate_config(cfg, env);

    std::vector<Method> methods;
    if (cfg.method != MethodChoice::Collocation) methods.push_back(Method::Tau);
    if (cfg.method != MethodChoice::Tau) methods.push_back(Method::Collocation);

    RunSummary summary;
    StagedOutput staged(cfg.out_dir);
    for (Method m : methods) {
        summary.runs.push_back(run_method(env, cfg, m));
        fs::path dir = staged.path();
        if (methods.size() > 1) {
            dir /= to_string(m);
            fs::create_directories(dir);
        }
        write_csv_family(summary.runs.back(), cfg, env, env_text, dir);
    }

    if (methods.size() > 1) {
        const auto& a = summary.runs[0];
        const auto& b = summary.runs[1];
        summary.max_abs_dtl_line = max_abs_diff(a.line.tl, b.line.tl);
        const std::size_t common = std::min(a.solution.modes.size(), b.solution.modes.size());
        double worst_kr = 0.0;
        for (std::size_t m = 0; m < common; ++m) {
            const cplx ka = a.solution.modes.modes[m].kr;
            const cplx kb = b.solution.modes.modes[m].kr;
            worst_kr = std::max(worst_kr, std::abs(ka - kb) / std::abs(ka));
        }
        ordered_json diff;
        diff["max_abs_dtl_line"] = *summary.max_abs_dtl_line;
        diff["max_abs_dtl_line_below_100db"] = max_abs_diff(a.line.tl, b.line.tl, 100.0);
        diff["max_abs_dtl_grid"] = max_abs_diff(a.grid.tl, b.grid.tl);
        diff["mode_count_tau"] = a.solution.modes.size();
        diff["mode_count_collocation"] = b.solution.modes.size();
        diff["compared_wavenumbers"] = common;
        diff["max_rel_dkr"] = worst_kr;
        write_text(staged.path() / "diff_summary", diff.dump(2) + "\n");

        ordered_json manifest;
        manifest["config"] = config_json(cfg, env_text);
        manifest["env_parsed"] = format_env(env);
        manifest["runs"] = {"tau", "collocation"};
        write_text(staged.path() / "run_manifest", manifest.dump(2) + "\n");
    }
    staged.commit();
    return summary;
}

}  // namespace atmos
