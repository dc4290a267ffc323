#include "atmos/modes_field.hpp"

#include <cmath>
#include <string>

#include "atmos/chebyshev.hpp"
#include "atmos/error.hpp"
#include "atmos/kernels.hpp"

namespace atmos {
namespace {

std::vector<double> heights_to_x(std::span<const double> heights, double top) {
    std::vector<double> x;
    x.reserve(heights.size());
    for (double z : heights) {
        if (!(z >= 0.0 && z <= top)) {
            throw Error(ErrorKind::Domain, "height " + std::to_string(z) + " outside [0, H]");
        }
        x.push_back(x_from_z(z, top));
    }
    return x;
}

void fix_sign(Eigen::Ref<Eigen::VectorXcd> repr, const Eigen::Ref<const Eigen::VectorXcd>& node_values) {
    Eigen::Index peak = 0;
    node_values.cwiseAbs().maxCoeff(&peak);
    const cplx v = node_values[peak];
    if (v.real() < 0.0 || (v.real() == 0.0 && v.imag() < 0.0)) repr = -repr;
}

}  // namespace

cplx modal_norm_integral(const Eigen::Ref<const Eigen::VectorXcd>& node_values,
                         const Eigen::Ref<const Eigen::VectorXd>& rho_samples, double height) {
    const int n = static_cast<int>(node_values.size()) - 1;
    if (rho_samples.size() != node_values.size()) {
        throw Error(ErrorKind::Dimension, "density samples do not match mode length");
    }
    NodeSamples integrand{node_values.array().square() / rho_samples.array().cast<cplx>()};
    return 0.5 * height * cheb::integrate_plain(integrand, n);
}

Eigen::VectorXcd mode_node_values(const Eigen::Ref<const Eigen::VectorXcd>& repr, Method method) {
    if (method == Method::Collocation) return repr;
    const int n = static_cast<int>(repr.size()) - 1;
    return cheb::node_value_matrix(n).cast<cplx>() * repr;
}

Eigen::VectorXcd normalize_mode(const Eigen::Ref<const Eigen::VectorXcd>& repr, Method method,
                                const Eigen::Ref<const Eigen::VectorXd>& rho_samples, double height) {
    const Eigen::VectorXcd nodes = mode_node_values(repr, method);
    const cplx integral = modal_norm_integral(nodes, rho_samples, height);
    if (!(std::abs(integral) >= 1e-30)) {
        throw Error(ErrorKind::DegenerateMode, "mode is nearly self-orthogonal, |I| = " +
                                                   std::to_string(std::abs(integral)));
    }
    const cplx scale = 1.0 / std::sqrt(integral);
    Eigen::VectorXcd out = scale * repr;
    fix_sign(out, scale * nodes);
    return out;
}

ModeSet build_mode_set(const Eigen::Ref<const Eigen::MatrixXcd>& full_vectors, std::span<const cplx> kr,
                       Method method, double omega, double height,
                       const Eigen::Ref<const Eigen::VectorXd>& rho_samples) {
    if (static_cast<std::size_t>(full_vectors.cols()) != kr.size()) {
        throw Error(ErrorKind::Dimension, "mode vectors and wavenumbers differ in count");
    }
    ModeSet ms;
    ms.omega = omega;
    ms.height = height;
    ms.method = method;
    ms.n = static_cast<int>(full_vectors.rows()) - 1;
    ms.rho_samples = rho_samples;
    if (full_vectors.cols() == 0) return ms;

    // One product for all modes instead of per-mode transforms.
    Eigen::MatrixXcd nodes;
    if (method == Method::Tau) {
        nodes = cheb::node_value_matrix(ms.n).cast<cplx>() * full_vectors;
    } else {
        nodes = full_vectors;
    }
    ms.modes.reserve(kr.size());
    for (Eigen::Index m = 0; m < full_vectors.cols(); ++m) {
        const cplx integral = modal_norm_integral(nodes.col(m), rho_samples, height);
        if (!(std::abs(integral) >= 1e-30)) {
            throw Error(ErrorKind::DegenerateMode, "mode " + std::to_string(m + 1) + " is nearly self-orthogonal");
        }
        const cplx scale = 1.0 / std::sqrt(integral);
        Eigen::VectorXcd repr = scale * full_vectors.col(m);
        fix_sign(repr, scale * nodes.col(m));
        ms.modes.push_back({kr[static_cast<std::size_t>(m)], std::move(repr)});
    }
    return ms;
}

Eigen::MatrixXcd eval_modes(const ModeSet& ms, std::span<const double> heights) {
    const auto x = heights_to_x(heights, ms.height);
    Eigen::MatrixXcd reprs(ms.n + 1, static_cast<Eigen::Index>(ms.modes.size()));
    for (std::size_t m = 0; m < ms.modes.size(); ++m) reprs.col(static_cast<Eigen::Index>(m)) = ms.modes[m].repr;
    return ms.method == Method::Tau ? kernels::evaluate_series(reprs, x) : kernels::evaluate_nodal(reprs, x);
}

cplx eval_mode(const ModeSet& ms, std::size_t mode, double z) {
    if (mode >= ms.modes.size()) throw Error(ErrorKind::Dimension, "mode index out of range");
    const double x = heights_to_x(std::span<const double>(&z, 1), ms.height).front();
    const auto& repr = ms.modes[mode].repr;
    if (ms.method == Method::Tau) return cheb::clenshaw(repr, x);
    const auto nodes = cheb::gauss_lobatto_nodes(ms.n);
    return cheb::barycentric_eval(repr, nodes, x);
}

double transmission_loss(cplx p, double p0_mag) {
    if (!(p0_mag > 0.0)) throw Error(ErrorKind::Domain, "reference pressure must be > 0");
    const double mag = std::abs(p);
    if (!(mag > 0.0)) return kTlCap;
    const double tl = -20.0 * std::log10(mag / p0_mag);
    return std::isfinite(tl) ? std::min(tl, kTlCap) : kTlCap;
}

FieldGrid synthesize_pressure(const ModeSet& ms, double zs, std::span<const double> ranges,
                              std::span<const double> heights, double p0_mag) {
    if (!(zs >= 0.0 && zs <= ms.height)) throw Error(ErrorKind::Domain, "source height outside [0, H]");
    for (double r : ranges) {
        if (!(r > 0.0)) throw Error(ErrorKind::Domain, "ranges must be > 0, got " + std::to_string(r));
    }
    FieldGrid grid;
    grid.ranges.assign(ranges.begin(), ranges.end());
    grid.heights.assign(heights.begin(), heights.end());
    grid.source_height = zs;
    grid.mode_count = ms.size();

    const auto nr = static_cast<Eigen::Index>(ranges.size());
    const auto nz = static_cast<Eigen::Index>(heights.size());
    if (ms.modes.empty()) {
        grid.pressure = Eigen::MatrixXcd::Zero(nr, nz);
    } else {
        Eigen::VectorXcd kr(static_cast<Eigen::Index>(ms.size()));
        for (std::size_t m = 0; m < ms.size(); ++m) kr[static_cast<Eigen::Index>(m)] = ms.modes[m].kr;
        const Eigen::VectorXcd src = eval_modes(ms, std::span<const double>(&zs, 1)).row(0).transpose();
        const Eigen::MatrixXcd recv = eval_modes(ms, heights);
        grid.pressure = kernels::synthesize_field(kr, src, recv, ranges);
    }
    grid.tl.resize(nr, nz);
    for (Eigen::Index j = 0; j < nz; ++j) {
        for (Eigen::Index i = 0; i < nr; ++i) grid.tl(i, j) = transmission_loss(grid.pressure(i, j), p0_mag);
    }
    return grid;
}

}  // namespace atmos
