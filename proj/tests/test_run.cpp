#include <gtest/gtest.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "atmos/run.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace atmos;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* const kPhysicsFiles[] = {"wavenumbers.csv", "modes.csv", "tl_grid.csv", "tl_line.csv", "run_manifest"};

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("atmos-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

double num(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    EXPECT_EQ(res.ptr, s.data() + s.size()) << s;
    return v;
}

SolveConfig small_config(const fs::path& out) {
    SolveConfig cfg = preset_config(Preset::Downwind);
    cfg.n = 128;
    cfg.r_max = 2000.0;
    cfg.dr = 50.0;
    cfg.r_min = 50.0;
    cfg.dz = 10.0;
    cfg.out_dir = out;
    return cfg;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ATMOS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ErrorKind kind_of(auto f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::Io;
}

}  // namespace

TEST(Formatting, SeventeenDigitsRoundTrip) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 10000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        EXPECT_EQ(num(format_number(v)), v);
    }
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(10.0), "10");
}

TEST(Formatting, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ExitCodes, Mapping) {
    EXPECT_EQ(exit_code_for(ErrorKind::Config), 2);
    EXPECT_EQ(exit_code_for(ErrorKind::Parse), 3);
    for (auto k : {ErrorKind::InvalidTruncation, ErrorKind::Dimension, ErrorKind::Domain,
                   ErrorKind::SingularImpedance, ErrorKind::Elimination, ErrorKind::EigenSolve,
                   ErrorKind::DegenerateMode}) {
        EXPECT_EQ(exit_code_for(k), 4);
    }
    EXPECT_EQ(exit_code_for(ErrorKind::Io), 1);
}

TEST(Config, PresetsMirrorBenchmarks) {
    const auto down = preset_config(Preset::Downwind);
    EXPECT_EQ(down.vp_min, 341.7);
    EXPECT_EQ(down.vp_max, 391.2);
    EXPECT_EQ(down.r_max, 5000.0);
    const auto up = preset_config(Preset::Upwind);
    EXPECT_FALSE(up.vp_min.has_value());
    EXPECT_EQ(up.vp_max, 393.2);
    EXPECT_EQ(up.r_max, 10000.0);
    for (const auto& c : {down, up}) {
        EXPECT_EQ(c.frequency_hz, 100.0);
        EXPECT_EQ(c.zs, 5.0);
        EXPECT_EQ(c.n, 1500);
        EXPECT_EQ(c.receiver_z, 1.0);
        EXPECT_EQ(c.dr, 10.0);
        EXPECT_EQ(c.dz, 2.0);
        EXPECT_EQ(c.p0, 1.0);
        EXPECT_EQ(c.mode_columns, 6);
    }
}

TEST(Config, ValidationRejectsEachViolation) {
    const auto env = parse_env(preset_env_text(Preset::Downwind));
    const auto base = small_config("/tmp/unused");
    EXPECT_NO_THROW(validate_config(base, env));
    std::vector<std::function<void(SolveConfig&)>> breakers{
        [](SolveConfig& c) { c.frequency_hz = 0.0; },   [](SolveConfig& c) { c.zs = 2500.0; },
        [](SolveConfig& c) { c.zs = -1.0; },            [](SolveConfig& c) { c.n = 7; },
        [](SolveConfig& c) { c.r_min = 0.0; },          [](SolveConfig& c) { c.dr = -1.0; },
        [](SolveConfig& c) { c.r_max = 1.0; },          [](SolveConfig& c) { c.z_max = 800.0; },
        [](SolveConfig& c) { c.dz = 0.0; },             [](SolveConfig& c) { c.receiver_z = 701.0; },
        [](SolveConfig& c) { c.p0 = 0.0; },             [](SolveConfig& c) { c.vp_min = 400.0; },
        [](SolveConfig& c) { c.out_dir.clear(); },
        [](SolveConfig& c) { c.r_min = 0.1; c.dr = 0.1; c.r_max = 1e5; c.dz = 1.0; },
    };
    for (std::size_t i = 0; i < breakers.size(); ++i) {
        auto cfg = base;
        breakers[i](cfg);
        try {
            validate_config(cfg, env);
            ADD_FAILURE() << "case " << i << " accepted";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::Config) << i;
            EXPECT_EQ(std::string(e.what()).rfind("[config]", 0), 0u) << i;
        }
    }
}

TEST(Config, GridsIncludeEndpoints) {
    auto cfg = small_config("/tmp/unused");
    cfg.r_min = 10.0;
    cfg.r_max = 5000.0;
    cfg.dr = 10.0;
    const auto r = range_grid(cfg);
    ASSERT_EQ(r.size(), 500u);
    EXPECT_EQ(r.front(), 10.0);
    EXPECT_EQ(r.back(), 5000.0);
    const auto env = parse_env(preset_env_text(Preset::Downwind));
    cfg.dz = 2.0;
    const auto z = height_grid(cfg, env);
    ASSERT_EQ(z.size(), 351u);
    EXPECT_EQ(z.front(), 0.0);
    EXPECT_EQ(z.back(), 700.0);
}

TEST(RunSolve, WritesCsvFamilyWithStableSchema) {
    TempDir tmp;
    auto cfg = small_config(tmp.path() / "out");
    const auto summary = run_solve(cfg);
    ASSERT_EQ(summary.runs.size(), 2u);
    ASSERT_TRUE(summary.max_abs_dtl_line.has_value());
    const fs::path out = cfg.out_dir;
    EXPECT_TRUE(fs::exists(out / "diff_summary"));
    EXPECT_TRUE(fs::exists(out / "run_manifest"));
    for (const auto& entry : fs::directory_iterator(out)) {
        EXPECT_NE(entry.path().filename().string().rfind(".staging", 0), 0u) << "staging left behind";
    }

    const std::size_t nr = range_grid(cfg).size();
    for (std::size_t k = 0; k < 2; ++k) {
        const fs::path dir = out / (k == 0 ? "tau" : "collocation");
        const auto& run = summary.runs[k];
        for (const char* f : kPhysicsFiles) {
            ASSERT_TRUE(fs::exists(dir / f)) << f;
            EXPECT_EQ(slurp(dir / f).find('\r'), std::string::npos);
        }

        const auto wn = read_csv(dir / "wavenumbers.csv");
        ASSERT_FALSE(wn.empty());
        EXPECT_EQ(wn[0], (std::vector<std::string>{"m", "Re_kr", "Im_kr", "phase_velocity"}));
        ASSERT_EQ(wn.size(), run.solution.modes.size() + 1);
        for (std::size_t m = 1; m < wn.size(); ++m) {
            EXPECT_EQ(wn[m][0], std::to_string(m));
            EXPECT_EQ(num(wn[m][1]), run.solution.modes.modes[m - 1].kr.real());
            const double vp = num(wn[m][3]);
            EXPECT_GE(vp, 341.7);
            EXPECT_LE(vp, 391.2);
        }

        const auto modes = read_csv(dir / "modes.csv");
        const std::size_t ncols = std::min<std::size_t>(6, run.solution.modes.size());
        ASSERT_EQ(modes.size(), 702u);
        EXPECT_EQ(modes[0].size(), 1 + 2 * ncols);
        EXPECT_EQ(modes[0][0], "z");
        if (ncols > 0) {
            EXPECT_EQ(modes[0][1], "Re_psi1");
            EXPECT_EQ(modes[0][2], "Im_psi1");
        }
        for (std::size_t i = 1; i < modes.size(); ++i) EXPECT_EQ(num(modes[i][0]), double(i - 1));

        const auto grid = read_csv(dir / "tl_grid.csv");
        EXPECT_EQ(grid[0], (std::vector<std::string>{"r", "z", "TL"}));
        EXPECT_EQ(grid.size(), 1 + nr * 71);
        const auto line = read_csv(dir / "tl_line.csv");
        EXPECT_EQ(line[0], (std::vector<std::string>{"r", "TL"}));
        ASSERT_EQ(line.size(), 1 + nr);
        EXPECT_EQ(num(line[1][0]), 50.0);
        EXPECT_EQ(num(line.back()[0]), 2000.0);

        const auto timings = read_csv(dir / "timings.csv");
        ASSERT_EQ(timings.size(), 6u);
        const char* stages[] = {"assemble", "eigensolve", "modes", "field", "total"};
        for (int i = 0; i < 5; ++i) {
            EXPECT_EQ(timings[i + 1][0], stages[i]);
            EXPECT_GE(num(timings[i + 1][1]), 0.0);
        }
    }

    // The overlay diff recomputed from the written lines matches the summary.
    const auto a = read_csv(out / "tau" / "tl_line.csv");
    const auto b = read_csv(out / "collocation" / "tl_line.csv");
    double worst = 0.0;
    for (std::size_t i = 1; i < a.size(); ++i) worst = std::max(worst, std::abs(num(a[i][1]) - num(b[i][1])));
    const json diff = json::parse(slurp(out / "diff_summary"));
    EXPECT_NEAR(diff["max_abs_dtl_line"].get<double>(), worst, 1e-12);
    EXPECT_EQ(diff["max_abs_dtl_line"].get<double>(), *summary.max_abs_dtl_line);
    for (const char* key : {"max_abs_dtl_line_below_100db", "max_abs_dtl_grid", "mode_count_tau",
                            "mode_count_collocation", "compared_wavenumbers", "max_rel_dkr"}) {
        EXPECT_TRUE(diff.contains(key)) << key;
    }
}

TEST(RunSolve, ManifestIsCompleteAndReproducesRun) {
    TempDir tmp;
    const std::string env_text = std::string(preset_env_text(Preset::Upwind)) + "# local copy\n";
    spit(tmp.path() / "env.txt", env_text);
    SolveConfig cfg = small_config(tmp.path() / "first");
    cfg.preset.reset();
    cfg.env_path = (tmp.path() / "env.txt").string();
    cfg.method = MethodChoice::Tau;
    cfg.vp_min.reset();
    cfg.vp_max = 393.2;
    cfg.mode_columns = 3;
    (void)run_solve(cfg);

    const json manifest = json::parse(slurp(cfg.out_dir / "run_manifest"));
    const json& c = manifest["config"];
    for (const char* key : {"env_path", "preset", "method", "freq_hz", "zs_m", "N", "vp_min", "vp_max", "r_min_m",
                            "r_max_m", "dr_m", "z_max_m", "dz_m", "receiver_z_m", "p0", "mode_columns",
                            "out_dir", "env_sha256", "env_text"}) {
        EXPECT_TRUE(c.contains(key)) << key;
    }
    EXPECT_EQ(c["env_sha256"].get<std::string>(), sha256_hex(env_text));
    EXPECT_EQ(c["env_text"].get<std::string>(), env_text);

    // Rebuild the run purely from the manifest.
    spit(tmp.path() / "env2.txt", c["env_text"].get<std::string>());
    SolveConfig again;
    again.env_path = (tmp.path() / "env2.txt").string();
    again.method = c["method"] == "tau" ? MethodChoice::Tau : MethodChoice::Collocation;
    again.frequency_hz = c["freq_hz"];
    again.zs = c["zs_m"];
    again.n = c["N"];
    if (!c["vp_min"].is_null()) again.vp_min = c["vp_min"].get<double>();
    if (!c["vp_max"].is_null()) again.vp_max = c["vp_max"].get<double>();
    again.r_min = c["r_min_m"];
    again.r_max = c["r_max_m"];
    again.dr = c["dr_m"];
    if (!c["z_max_m"].is_null()) again.z_max = c["z_max_m"].get<double>();
    again.dz = c["dz_m"];
    again.receiver_z = c["receiver_z_m"];
    again.p0 = c["p0"];
    again.mode_columns = c["mode_columns"];
    again.out_dir = tmp.path() / "second";
    (void)run_solve(again);

    for (const char* f : {"wavenumbers.csv", "modes.csv", "tl_grid.csv", "tl_line.csv"}) {
        EXPECT_EQ(slurp(cfg.out_dir / f), slurp(again.out_dir / f)) << f;
    }
}

TEST(RunSolve, RepeatedRunsAreByteIdentical) {
    TempDir tmp;
    const auto cfg = small_config(tmp.path() / "out");
    (void)run_solve(cfg);
    fs::rename(cfg.out_dir, tmp.path() / "first");
    (void)run_solve(cfg);
    for (const char* sub : {"tau", "collocation"}) {
        for (const char* f : kPhysicsFiles) {
            const auto x = slurp(tmp.path() / "first" / sub / f);
            EXPECT_FALSE(x.empty());
            EXPECT_EQ(x, slurp(cfg.out_dir / sub / f)) << sub << "/" << f;
        }
    }
    for (const char* f : {"diff_summary", "run_manifest"}) {
        EXPECT_EQ(slurp(tmp.path() / "first" / f), slurp(cfg.out_dir / f)) << f;
    }
}

TEST(RunSolve, FailureLeavesNothingBehind) {
    TempDir tmp;
    spit(tmp.path() / "env.txt", "0 0\n50\n0 340 0 1.2\n100 340 0 1.2\n");
    SolveConfig cfg;
    cfg.env_path = (tmp.path() / "env.txt").string();
    cfg.n = 16;
    cfg.r_max = 100.0;
    cfg.out_dir = tmp.path() / "out";
    try {
        (void)run_solve(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularImpedance);
        EXPECT_NE(std::string(e.what()).find("[assemble]"), std::string::npos);
    }
    EXPECT_TRUE(!fs::exists(cfg.out_dir) || fs::is_empty(cfg.out_dir));
}

TEST(RunSolve, ParseAndIoErrors) {
    TempDir tmp;
    spit(tmp.path() / "bad.txt", "1 2\n50\n0 340 0 1.2\n100 abc 0 1.2\n");
    SolveConfig cfg;
    cfg.env_path = (tmp.path() / "bad.txt").string();
    cfg.n = 16;
    cfg.out_dir = tmp.path() / "out";
    try {
        (void)run_solve(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find("[parse]"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
    EXPECT_FALSE(fs::exists(cfg.out_dir));

    spit(tmp.path() / "file", "x");
    auto blocked = small_config(tmp.path() / "file" / "sub");
    EXPECT_EQ(kind_of([&] { (void)run_solve(blocked); }), ErrorKind::Io);

    SolveConfig missing;
    missing.env_path = (tmp.path() / "nope.txt").string();
    missing.out_dir = tmp.path() / "out";
    EXPECT_EQ(kind_of([&] { (void)run_solve(missing); }), ErrorKind::Config);
}

TEST(RunMethod, EigensolveDominatesAtProductionScale) {
    auto cfg = small_config("/tmp/unused");
    cfg.n = 600;
    const auto env = parse_env(preset_env_text(Preset::Downwind));
    for (Method m : {Method::Tau, Method::Collocation}) {
        const auto run = run_method(env, cfg, m);
        const auto& t = run.solution.timings;
        for (double s : {t.assemble_s, t.eigensolve_s, t.modes_s, t.field_s}) {
            EXPECT_GE(s, 0.0);
            EXPECT_LT(s, run.total_s);
        }
        EXPECT_GT(t.eigensolve_s, t.assemble_s);
        EXPECT_GT(t.eigensolve_s, t.modes_s);
        EXPECT_GT(t.eigensolve_s, t.field_s);
    }
}

TEST(Cli, ExitCodesAndOutput) {
    TempDir tmp;
    const std::string out = (tmp.path() / "out").string();
    EXPECT_EQ(run_cli("solve --preset downwind --N 96 --rmax 500 --dr 50 --dz 50 --out " + out), 0);
    EXPECT_TRUE(fs::exists(fs::path(out) / "tau" / "wavenumbers.csv"));
    EXPECT_TRUE(fs::exists(fs::path(out) / "collocation" / "tl_line.csv"));
    EXPECT_TRUE(fs::exists(fs::path(out) / "diff_summary"));

    const std::string solo = (tmp.path() / "solo").string();
    EXPECT_EQ(run_cli("solve --preset upwind --method collocation --N 64 --rmax 200 --dr 100 --dz 100 --out " + solo),
              0);
    EXPECT_TRUE(fs::exists(fs::path(solo) / "wavenumbers.csv"));

    EXPECT_EQ(run_cli("solve --preset downwind --N 4 --out " + out), 2);
    EXPECT_EQ(run_cli("solve --preset sideways --out " + out), 2);
    EXPECT_EQ(run_cli("solve --preset downwind --bogus 1 --out " + out), 2);
    EXPECT_EQ(run_cli("solve --preset downwind"), 2);

    spit(tmp.path() / "bad.txt", "1 2\n50\n0 340 0 1.2\n100 340 0 1.2\n100 341 0 1.2\n");
    EXPECT_EQ(run_cli("solve --env " + (tmp.path() / "bad.txt").string() + " --N 16 --out " + out), 3);

    spit(tmp.path() / "zero.txt", "0 0\n50\n0 340 0 1.2\n100 340 0 1.2\n");
    EXPECT_EQ(run_cli("solve --env " + (tmp.path() / "zero.txt").string() + " --N 16 --rmax 50 --out " +
                      (tmp.path() / "z").string()),
              4);
    EXPECT_TRUE(!fs::exists(tmp.path() / "z") || fs::is_empty(tmp.path() / "z"));
}
