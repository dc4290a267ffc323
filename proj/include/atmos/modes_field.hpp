#pragma once

// Normalized modes, their evaluation at arbitrary heights, and synthesis of
// the pressure and transmission-loss fields from a mode set.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "atmos/discretization.hpp"

namespace atmos {

inline constexpr double kTlCap = 300.0;  // dB, reported where |p| underflows

struct Mode {
    cplx kr;
    Eigen::VectorXcd repr;  // Chebyshev coefficients (tau) or node samples (collocation)
};

struct ModeSet {
    double omega = 0.0;
    double height = 0.0;  // H
    Method method = Method::Tau;
    int n = 0;
    std::vector<Mode> modes;
    Eigen::VectorXd rho_samples;  // density at the nodes

    [[nodiscard]] std::size_t size() const { return modes.size(); }
};

struct FieldGrid {
    std::vector<double> ranges;   // m, increasing, > 0
    std::vector<double> heights;  // m
    Eigen::MatrixXcd pressure;    // ranges x heights
    Eigen::MatrixXd tl;           // dB
    double source_height = 0.0;
    std::size_t mode_count = 0;
};

/// (H/2) * integrate_plain(psi^2 / rho) with psi given by node values.
[[nodiscard]] cplx modal_norm_integral(const Eigen::Ref<const Eigen::VectorXcd>& node_values,
                                       const Eigen::Ref<const Eigen::VectorXd>& rho_samples, double height);

/// Scale a mode by 1 / sqrt(I), I = integral of psi^2 / rho over [0, H] (complex
/// square, principal root), then flip sign so the largest-magnitude node
/// value has positive real part. Throws DegenerateMode when |I| < 1e-30.
[[nodiscard]] Eigen::VectorXcd normalize_mode(const Eigen::Ref<const Eigen::VectorXcd>& repr, Method method,
                                              const Eigen::Ref<const Eigen::VectorXd>& rho_samples,
                                              double height);

/// Node values of a mode representation.
[[nodiscard]] Eigen::VectorXcd mode_node_values(const Eigen::Ref<const Eigen::VectorXcd>& repr, Method method);

/// Build a normalized mode set from full (unnormalized) mode vectors, one per column.
[[nodiscard]] ModeSet build_mode_set(const Eigen::Ref<const Eigen::MatrixXcd>& full_vectors,
                                     std::span<const cplx> kr, Method method, double omega, double height,
                                     const Eigen::Ref<const Eigen::VectorXd>& rho_samples);

[[nodiscard]] cplx eval_mode(const ModeSet& ms, std::size_t mode, double z);

/// Mode values at the given heights: heights x modes.
[[nodiscard]] Eigen::MatrixXcd eval_modes(const ModeSet& ms, std::span<const double> heights);

[[nodiscard]] double transmission_loss(cplx p, double p0_mag);

[[nodiscard]] FieldGrid synthesize_pressure(const ModeSet& ms, double zs, std::span<const double> ranges,
                                            std::span<const double> heights, double p0_mag = 1.0);

}  // namespace atmos
