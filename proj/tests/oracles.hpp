#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the solver's discretization code: each oracle works from the
// underlying mathematics directly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "atmos/atmosphere.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

/// T_k(x) = cos(k arccos x).
inline double cheb_t(int k, double x) { return std::cos(k * std::acos(std::clamp(x, -1.0, 1.0))); }

/// dT_k/dx = k U_{k-1}(x), with the endpoint limits k^2 (+-1)^(k+1).
inline double cheb_t_prime(int k, double x) {
    if (k == 0) return 0.0;
    if (x >= 1.0) return double(k) * k;
    if (x <= -1.0) return (k % 2 == 0 ? -1.0 : 1.0) * k * k;
    const double th = std::acos(x);
    return k * std::sin(k * th) / std::sin(th);
}

/// Gauss-Chebyshev (first kind) rule with m points: exact for
/// integral of p(x) / sqrt(1 - x^2) when deg p <= 2m - 1.
template <class F>
double gauss_chebyshev(F f, int m) {
    double s = 0.0;
    for (int i = 1; i <= m; ++i) s += f(std::cos((2.0 * i - 1.0) * kPi / (2.0 * m)));
    return s * kPi / m;
}

/// Central second difference, evaluated in extended precision.
template <class F>
double second_difference(F f, double x, double h) {
    const long double xl = x;
    const long double hl = h;
    return static_cast<double>((f(xl + hl) - 2.0L * f(xl) + f(xl - hl)) / (hl * hl));
}

/// Roots kr^2 of the constant-coefficient Robin problem
///   psi'' + s^2 psi = 0 on [0, H],  psi'(0) + G psi(0) = 0,  psi'(H) + alpha psi(H) = 0,
/// with psi = A cos(s z) + B sin(s z), s = 2 gamma / H, kr^2 = k^2 - s^2.
/// The characteristic function, divided by cos(2 gamma), is
///   h(gamma) = s (G - alpha) + (G alpha + s^2) tan(2 gamma).
/// Newton iterations are started on a dense grid of complex gamma; roots are
/// de-duplicated, gamma = 0 (trivial solution) discarded, and the `count`
/// values of largest Re(kr^2) returned.
inline std::vector<cplx> robin_kr2(cplx k, cplx g, cplx alpha, double height, std::size_t count) {
    const double ds = 2.0 / height;
    auto h = [&](cplx gm) {
        const cplx s = ds * gm;
        return s * (g - alpha) + (g * alpha + s * s) * std::tan(2.0 * gm);
    };
    auto dh = [&](cplx gm) {
        const cplx s = ds * gm;
        const cplx t = std::tan(2.0 * gm);
        return ds * (g - alpha) + 2.0 * s * ds * t + (g * alpha + s * s) * 2.0 * (1.0 + t * t);
    };

    std::vector<double> im_starts;
    for (double b = -3.0; b <= 3.0 + 1e-12; b += 0.1) im_starts.push_back(b);
    for (double b = -400.0; b <= 400.0 + 1e-12; b += 2.5) im_starts.push_back(b);

    std::vector<cplx> roots;
    for (double a = 0.0; a <= 60.0 + 1e-12; a += 0.2) {
        for (double b : im_starts) {
            cplx gm(a, b);
            bool ok = false;
            for (int it = 0; it < 80; ++it) {
                const cplx d = dh(gm);
                if (!std::isfinite(std::abs(d)) || std::abs(d) == 0.0) break;
                const cplx step = h(gm) / d;
                gm -= step;
                if (!std::isfinite(std::abs(gm))) break;
                if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(gm))) {
                    ok = true;
                    break;
                }
            }
            if (!ok || std::abs(gm) < 1e-8) continue;
            // Reject poles of tan and spurious stalls by checking the
            // unscaled characteristic function.
            const cplx s = ds * gm;
            const cplx f = (g * s - s * alpha) * std::cos(2.0 * gm) + (g * alpha + s * s) * std::sin(2.0 * gm);
            const double scale = (std::abs(g * s) + std::abs(s * alpha)) * std::abs(std::cos(2.0 * gm)) +
                                 (std::abs(g * alpha) + std::norm(s)) * std::abs(std::sin(2.0 * gm));
            if (!(std::abs(f) <= 1e-10 * scale)) continue;
            const cplx kr2 = k * k - s * s;
            const bool dup = std::any_of(roots.begin(), roots.end(), [&](cplx r) {
                return std::abs(r - kr2) <= 1e-11 * std::abs(kr2);
            });
            if (!dup) roots.push_back(kr2);
        }
    }
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() > b.real(); });
    if (roots.size() > count) roots.resize(count);
    return roots;
}

/// Brute-force constrained eigenproblem: find psi in the null space of the
/// two boundary rows with (L psi)_i = lambda psi_i on the given equation
/// rows. Solved directly in a null-space basis, with no block elimination.
inline Eigen::VectorXcd constrained_eigenvalues(const Eigen::MatrixXcd& op, const Eigen::RowVectorXcd& p,
                                                const Eigen::RowVectorXcd& q,
                                                const std::vector<int>& equation_rows) {
    const Eigen::Index size = op.rows();
    Eigen::MatrixXcd b(2, size);
    b.row(0) = p;
    b.row(1) = q;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeFullV);
    const Eigen::MatrixXcd basis = svd.matrixV().rightCols(size - 2);
    const auto m = static_cast<Eigen::Index>(equation_rows.size());
    Eigen::MatrixXcd lhs(m, size - 2), rhs(m, size - 2);
    const Eigen::MatrixXcd op_basis = op * basis;
    for (Eigen::Index i = 0; i < m; ++i) {
        lhs.row(i) = op_basis.row(equation_rows[static_cast<std::size_t>(i)]);
        rhs.row(i) = basis.row(equation_rows[static_cast<std::size_t>(i)]);
    }
    const Eigen::MatrixXcd standard = rhs.fullPivLu().solve(lhs);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(standard, false);
    return es.eigenvalues();
}

/// Largest over a of min over b of |a - b| / |a|: every value in `a` has a
/// close partner in `b`.
inline double max_nearest_relative(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double best = INFINITY;
        for (Eigen::Index j = 0; j < b.size(); ++j) best = std::min(best, std::abs(a[i] - b[j]));
        worst = std::max(worst, best / std::max(std::abs(a[i]), 1e-300));
    }
    return worst;
}

/// Piecewise-linear environment with constant c, no attenuation, density rho.
inline atmos::AtmosphereEnv constant_env(double c, double height, cplx impedance, double rho = 1.2) {
    return atmos::AtmosphereEnv({{0.0, c, 0.0, rho}, {height, c, 0.0, rho}}, height / 2.0, impedance);
}

/// c(z) = 340 + 5 sin(pi z / H), tabulated densely enough that linear
/// interpolation is indistinguishable from the smooth profile at double
/// precision over the node counts used in tests.
inline atmos::AtmosphereEnv smooth_env(double height, cplx impedance, int rows = 100000) {
    std::vector<atmos::ProfilePoint> pts;
    pts.reserve(static_cast<std::size_t>(rows) + 1);
    for (int i = 0; i <= rows; ++i) {
        const double z = height * i / rows;
        pts.push_back({z, 340.0 + 5.0 * std::sin(kPi * z / height), 0.0, 1.2});
    }
    return atmos::AtmosphereEnv(std::move(pts), height / 2.0, impedance);
}

inline Eigen::VectorXcd random_cvector(std::mt19937_64& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(u(rng), u(rng));
    return v;
}

inline Eigen::MatrixXcd random_cmatrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) m(i, j) = cplx(u(rng), u(rng));
    return m;
}

/// A smooth complex test function on [-1, 1] with a few random frequencies.
struct SmoothFunction {
    cplx a0, a1, a2;
    double w1, w2;

    static SmoothFunction random(std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        return {cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), 1.0 + std::abs(u(rng)),
                2.0 + 2.0 * std::abs(u(rng))};
    }
    cplx operator()(double x) const {
        return a0 + a1 * std::exp(cplx(0.0, w1 * x)) + a2 / (2.0 + std::cos(w2 * x));
    }
};

}  // namespace oracle
