#pragma once

// Layered atmosphere: piecewise-linear profiles of sound speed, attenuation
// and density over [0, H], ground impedance, and the derived complex
// wavenumber and boundary constants.

#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace atmos {

using cplx = std::complex<double>;

/// 1 / (40 pi log10(e)): converts dB per wavelength to the imaginary part of k / (omega / c).
inline constexpr double kAttenuationEta = 1.0 / (40.0 * std::numbers::pi * std::numbers::log10e);

inline constexpr double kDefaultDensity = 1.2;  // kg/m^3

struct ProfilePoint {
    double z;     // m
    double c;     // m/s
    double beta;  // dB per wavelength
    double rho;   // kg/m^3
};

struct ProfileSample {
    double c;
    double beta;
    double rho;
};

struct BoundaryConstants {
    cplx ground;  // G = i k(0) / Z
    cplx top;     // alpha = -i k(H)
};

/// Validated, immutable environment. Points are ascending in z, the first at
/// z = 0 and the last at z = H; h marks the top of the region of interest.
class AtmosphereEnv {
public:
    AtmosphereEnv(std::vector<ProfilePoint> points, double h, cplx impedance);

    [[nodiscard]] const std::vector<ProfilePoint>& points() const { return points_; }
    [[nodiscard]] double top() const { return points_.back().z; }              // H
    [[nodiscard]] double interest_height() const { return h_; }                // h
    [[nodiscard]] cplx impedance() const { return impedance_; }                // Z

    /// Linear interpolation between bracketing rows; exact at rows.
    [[nodiscard]] ProfileSample sample(double z) const;

private:
    std::vector<ProfilePoint> points_;
    double h_;
    cplx impedance_;
};

/// Env file: `Z_real Z_imag`, then `h`, then rows `z c beta rho` in any order.
/// `#` starts a comment. Errors carry the 1-based line number.
[[nodiscard]] AtmosphereEnv parse_env(std::string_view text);

/// Inverse of parse_env with 17 significant digits; rows ascending in z.
[[nodiscard]] std::string format_env(const AtmosphereEnv& env);

[[nodiscard]] ProfileSample sample_profile(const AtmosphereEnv& env, double z);

/// k(z) = (1 + i eta beta(z)) omega / c(z).
[[nodiscard]] cplx complex_wavenumber(const AtmosphereEnv& env, double z, double omega);

[[nodiscard]] BoundaryConstants boundary_constants(const AtmosphereEnv& env, double omega);

/// z = H (x + 1) / 2.
[[nodiscard]] double z_from_x(double x, double top);
/// x = 2 z / H - 1.
[[nodiscard]] double x_from_z(double z, double top);

enum class Preset { Downwind, Upwind };

/// Env file text for the two benchmark atmospheres (density 1.2 kg/m^3).
[[nodiscard]] std::string_view preset_env_text(Preset preset);

}  // namespace atmos
