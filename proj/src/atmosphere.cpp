#include "atmos/atmosphere.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "atmos/error.hpp"

namespace atmos {
namespace {

constexpr std::string_view kDownwindEnv = R"(# downwind benchmark
12.97 12.38
700
# z      c      beta   rho
2000   344.0   2.50   1.2
1500   344.0   0.10   1.2
900    344.0   0.01   1.2
700    344.0   0.00   1.2
500    341.5   0.00   1.2
100    349.0   0.00   1.2
0      345.0   0.00   1.2
)";

constexpr std::string_view kUpwindEnv = R"(# upwind benchmark
12.97 12.38
900
# z      c      beta   rho
2000   346.0   1.00   1.2
1500   346.0   0.10   1.2
1200   346.0   0.01   1.2
900    346.0   0.00   1.2
500    348.0   0.00   1.2
350    344.0   0.00   1.2
100    340.0   0.00   1.2
0      344.0   0.00   1.2
)";

void check_point(const ProfilePoint& p, int line) {
    if (!std::isfinite(p.z) || !std::isfinite(p.c) || !std::isfinite(p.beta) ||
        !std::isfinite(p.rho)) {
        throw Error(ErrorKind::Parse, "non-finite profile value", line);
    }
    if (p.z < 0.0) throw Error(ErrorKind::Parse, "height must be >= 0", line);
    if (p.c <= 0.0) throw Error(ErrorKind::Parse, "sound speed must be > 0", line);
    if (p.rho <= 0.0) throw Error(ErrorKind::Parse, "density must be > 0", line);
    if (p.beta < 0.0) throw Error(ErrorKind::Parse, "attenuation must be >= 0", line);
}

}  // namespace

AtmosphereEnv::AtmosphereEnv(std::vector<ProfilePoint> points, double h, cplx impedance)
    : points_(std::move(points)), h_(h), impedance_(impedance) {
    std::sort(points_.begin(), points_.end(),
              [](const ProfilePoint& a, const ProfilePoint& b) { return a.z < b.z; });
    if (points_.size() < 2) throw Error(ErrorKind::Parse, "need at least two profile rows");
    for (const auto& p : points_) check_point(p, 0);
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i].z > points_[i - 1].z)) {
            throw Error(ErrorKind::Parse, "duplicate height " + std::to_string(points_[i].z));
        }
    }
    if (points_.front().z != 0.0) throw Error(ErrorKind::Parse, "profile has no row at z = 0");
    if (!(h_ > 0.0 && h_ < top())) {
        throw Error(ErrorKind::Parse, "interest height h must satisfy 0 < h < H");
    }
    if (!std::isfinite(impedance_.real()) || !std::isfinite(impedance_.imag())) {
        throw Error(ErrorKind::Parse, "non-finite ground impedance");
    }
}

ProfileSample AtmosphereEnv::sample(double z) const {
    if (!(z >= 0.0 && z <= top())) {
        throw Error(ErrorKind::Domain, "height " + std::to_string(z) + " outside [0, H]");
    }
    auto upper = std::lower_bound(points_.begin(), points_.end(), z,
                                  [](const ProfilePoint& p, double v) { return p.z < v; });
    if (upper->z == z) return {upper->c, upper->beta, upper->rho};
    const auto& hi = *upper;
    const auto& lo = *(upper - 1);
    const double t = (z - lo.z) / (hi.z - lo.z);
    auto lerp = [t](double a, double b) { return a + t * (b - a); };
    return {lerp(lo.c, hi.c), lerp(lo.beta, hi.beta), lerp(lo.rho, hi.rho)};
}

AtmosphereEnv parse_env(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    int stage = 0;
    cplx impedance;
    double h = 0.0;
    std::vector<ProfilePoint> points;
    std::vector<int> point_lines;

    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        std::vector<double> values;
        std::string tok;
        while (fields >> tok) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw Error(ErrorKind::Parse, "not a number: '" + tok + "'", line_no);
            values.push_back(v);
        }
        if (values.empty()) continue;

        if (stage == 0) {
            if (values.size() != 2) throw Error(ErrorKind::Parse, "expected 'Z_real Z_imag'", line_no);
            impedance = {values[0], values[1]};
            stage = 1;
        } else if (stage == 1) {
            if (values.size() != 1) throw Error(ErrorKind::Parse, "expected absorber start height h", line_no);
            h = values[0];
            stage = 2;
        } else {
            if (values.size() != 4) throw Error(ErrorKind::Parse, "expected 'z c beta rho'", line_no);
            ProfilePoint p{values[0], values[1], values[2], values[3]};
            check_point(p, line_no);
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (points[i].z == p.z) {
                    throw Error(ErrorKind::Parse,
                                "duplicate height (also on line " + std::to_string(point_lines[i]) + ")",
                                line_no);
                }
            }
            points.push_back(p);
            point_lines.push_back(line_no);
        }
    }
    if (stage < 2) throw Error(ErrorKind::Parse, "missing header lines", line_no);
    if (points.size() < 2) throw Error(ErrorKind::Parse, "need at least two profile rows", line_no);
    const bool has_ground = std::any_of(points.begin(), points.end(),
                                        [](const ProfilePoint& p) { return p.z == 0.0; });
    if (!has_ground) throw Error(ErrorKind::Parse, "profile has no row at z = 0", line_no);
    double top = 0.0;
    for (const auto& p : points) top = std::max(top, p.z);
    if (!(h > 0.0 && h < top)) throw Error(ErrorKind::Parse, "interest height h must satisfy 0 < h < H", line_no);
    return AtmosphereEnv(std::move(points), h, impedance);
}

std::string format_env(const AtmosphereEnv& env) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << env.impedance().real() << ' ' << env.impedance().imag() << '\n';
    out << env.interest_height() << '\n';
    for (const auto& p : env.points()) {
        out << p.z << ' ' << p.c << ' ' << p.beta << ' ' << p.rho << '\n';
    }
    return out.str();
}

ProfileSample sample_profile(const AtmosphereEnv& env, double z) { return env.sample(z); }

cplx complex_wavenumber(const AtmosphereEnv& env, double z, double omega) {
    if (!(omega > 0.0)) throw Error(ErrorKind::Domain, "angular frequency must be > 0");
    const auto s = env.sample(z);
    return cplx(1.0, kAttenuationEta * s.beta) * (omega / s.c);
}

BoundaryConstants boundary_constants(const AtmosphereEnv& env, double omega) {
    const cplx z = env.impedance();
    if (z == cplx(0.0, 0.0)) {
        throw Error(ErrorKind::SingularImpedance, "ground impedance Z = 0");
    }
    const cplx i_unit(0.0, 1.0);
    return {i_unit * complex_wavenumber(env, 0.0, omega) / z,
            -i_unit * complex_wavenumber(env, env.top(), omega)};
}

double z_from_x(double x, double top) {
    if (!(x >= -1.0 && x <= 1.0)) throw Error(ErrorKind::Domain, "x outside [-1, 1]");
    return top * (x + 1.0) / 2.0;
}

double x_from_z(double z, double top) {
    if (!(z >= 0.0 && z <= top)) throw Error(ErrorKind::Domain, "z outside [0, H]");
    return 2.0 * z / top - 1.0;
}

std::string_view preset_env_text(Preset preset) {
    return preset == Preset::Downwind ? kDownwindEnv : kUpwindEnv;
}

}  // namespace atmos
