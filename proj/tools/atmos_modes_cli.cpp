// atmos-modes: normal-mode solver for range-independent atmospheric acoustics.
//
//   atmos-modes solve --preset downwind --out run/
//   atmos-modes solve --env table.env --method tau --freq 100 --zs 5 --N 1500 \
//                     --vp-min 341.7 --vp-max 391.2 --out run/

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "atmos/error.hpp"
#include "atmos/run.hpp"

namespace {

void apply_thread_limit() {
    if (const char* env = std::getenv("ATMOS_MODES_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) atmos::set_thread_limit(n);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring ATMOS_MODES_THREADS=" << env << '\n';
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chebyshev spectral normal-mode solver for atmospheric acoustics"};
    app.require_subcommand(1);
    auto* solve = app.add_subcommand("solve", "compute modes and transmission loss");

    std::string env_path, method = "both", preset, out;
    double freq = 0, zs = 0, vp_min = 0, vp_max = 0, rmax = 0, dr = 0, dz = 0, zmax = 0, receiver_z = 0, p0 = 0;
    int n = 0, mode_columns = 0;

    solve->add_option("--env", env_path, "environment file")->check(CLI::ExistingFile);
    solve->add_option("--preset", preset, "built-in benchmark atmosphere")
        ->check(CLI::IsMember({"downwind", "upwind"}));
    solve->add_option("--method", method, "tau, collocation or both")
        ->check(CLI::IsMember({"tau", "collocation", "both"}));
    auto* o_freq = solve->add_option("--freq", freq, "source frequency [Hz]");
    auto* o_zs = solve->add_option("--zs", zs, "source height [m]");
    auto* o_n = solve->add_option("--N", n, "spectral truncation order");
    auto* o_vpmin = solve->add_option("--vp-min", vp_min, "minimum phase velocity [m/s]");
    auto* o_vpmax = solve->add_option("--vp-max", vp_max, "maximum phase velocity [m/s]");
    auto* o_rmax = solve->add_option("--rmax", rmax, "maximum range [m]");
    auto* o_dr = solve->add_option("--dr", dr, "range step, also the first range [m]");
    auto* o_dz = solve->add_option("--dz", dz, "TL grid height step [m]");
    auto* o_zmax = solve->add_option("--zmax", zmax, "TL grid top [m], at most h");
    auto* o_rz = solve->add_option("--receiver-z", receiver_z, "receiver height for tl_line.csv [m]");
    auto* o_p0 = solve->add_option("--p0", p0, "reference pressure magnitude");
    auto* o_cols = solve->add_option("--mode-columns", mode_columns, "modes written to modes.csv");
    solve->add_option("--out", out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    apply_thread_limit();

    atmos::SolveConfig cfg;
    if (!preset.empty()) {
        cfg = atmos::preset_config(preset == "downwind" ? atmos::Preset::Downwind : atmos::Preset::Upwind);
    }
    cfg.env_path = env_path;
    cfg.out_dir = out;
    cfg.method = method == "tau"           ? atmos::MethodChoice::Tau
                 : method == "collocation" ? atmos::MethodChoice::Collocation
                                           : atmos::MethodChoice::Both;
    if (*o_freq) cfg.frequency_hz = freq;
    if (*o_zs) cfg.zs = zs;
    if (*o_n) cfg.n = n;
    if (*o_vpmin) cfg.vp_min = vp_min;
    if (*o_vpmax) cfg.vp_max = vp_max;
    if (*o_rmax) cfg.r_max = rmax;
    if (*o_dr) cfg.dr = cfg.r_min = dr;
    if (*o_dz) cfg.dz = dz;
    if (*o_zmax) cfg.z_max = zmax;
    if (*o_rz) cfg.receiver_z = receiver_z;
    if (*o_p0) cfg.p0 = p0;
    if (*o_cols) cfg.mode_columns = mode_columns;

    try {
        const auto summary = atmos::run_solve(cfg);
        for (const auto& run : summary.runs) {
            const auto& t = run.solution.timings;
            std::cout << atmos::to_string(run.solution.method) << ": " << run.solution.modes.size()
                      << " modes; assemble " << t.assemble_s << " s, eigensolve " << t.eigensolve_s
                      << " s, modes " << t.modes_s << " s, field " << t.field_s << " s\n";
        }
        if (summary.max_abs_dtl_line) {
            std::cout << "max |dTL| along receiver line: " << *summary.max_abs_dtl_line << " dB\n";
        }
        return 0;
    } catch (const atmos::Error& e) {
        std::cerr << "error (" << atmos::to_string(e.kind()) << ") " << e.what() << '\n';
        return atmos::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
