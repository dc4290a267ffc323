#include "atmos/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "atmos/error.hpp"
#include "atmos/kernels.hpp"

namespace atmos::cheb {
namespace {

using std::numbers::pi;

void require_order(int n) {
    if (n < 2) {
        throw Error(ErrorKind::InvalidTruncation,
                    "truncation order must be at least 2, got " + std::to_string(n));
    }
}

void require_length(Eigen::Index size, int n, const char* what) {
    if (size != static_cast<Eigen::Index>(n) + 1) {
        throw Error(ErrorKind::Dimension, std::string(what) + ": expected " +
                                              std::to_string(n + 1) + " entries, got " +
                                              std::to_string(size));
    }
}

}  // namespace

std::vector<double> gauss_lobatto_nodes(int n) {
    require_order(n);
    // -cos(j pi / N) written as a sine so that x_j = -x_{N-j} holds exactly.
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        x[j] = std::sin(pi * static_cast<double>(2 * j - n) / (2.0 * n));
    }
    return x;
}

std::vector<double> quadrature_weights(int n) {
    require_order(n);
    std::vector<double> w(static_cast<std::size_t>(n) + 1, pi / n);
    w.front() = w.back() = pi / (2.0 * n);
    return w;
}

cplx integrate_weighted(const NodeSamples& samples, int n) {
    require_order(n);
    require_length(samples.values.size(), n, "integrate_weighted");
    const auto w = quadrature_weights(n);
    cplx sum = 0.0;
    for (int j = 0; j <= n; ++j) sum += samples.values[j] * w[j];
    return sum;
}

cplx integrate_plain(const NodeSamples& samples, int n) {
    require_order(n);
    require_length(samples.values.size(), n, "integrate_plain");
    const auto w = quadrature_weights(n);
    cplx sum = 0.0;
    // sqrt(1 - x_j^2) = sin(j pi / N); zero at both ends.
    for (int j = 1; j < n; ++j) {
        sum += samples.values[j] * (w[j] * std::sin(pi * j / n));
    }
    return sum;
}

double cheb_value(int k, double x) {
    if (k < 0) throw Error(ErrorKind::Domain, "Chebyshev degree must be non-negative");
    if (!(std::abs(x) <= 1.0)) {
        throw Error(ErrorKind::Domain, "Chebyshev argument outside [-1, 1]: " + std::to_string(x));
    }
    if (k == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int i = 1; i < k; ++i) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

CoeffVector forward_transform(const NodeSamples& samples, int n) {
    require_order(n);
    require_length(samples.values.size(), n, "forward_transform");
    if (!samples.values.allFinite()) {
        throw Error(ErrorKind::Domain, "forward_transform: non-finite sample");
    }
    return {kernels::forward_transform(samples.values)};
}

cplx clenshaw(const Eigen::Ref<const Eigen::VectorXcd>& coeffs, double x) {
    const Eigen::Index n = coeffs.size();
    if (n == 0) return 0.0;
    cplx b1 = 0.0;
    cplx b2 = 0.0;
    for (Eigen::Index k = n - 1; k >= 1; --k) {
        const cplx b0 = coeffs[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return coeffs[0] + x * b1 - b2;
}

std::vector<cplx> backward_transform(const CoeffVector& coeffs, std::span<const double> x_points) {
    if (!coeffs.values.allFinite()) {
        throw Error(ErrorKind::Domain, "backward_transform: non-finite coefficient");
    }
    std::vector<cplx> out;
    out.reserve(x_points.size());
    for (double x : x_points) {
        if (!(std::abs(x) <= 1.0)) {
            throw Error(ErrorKind::Domain,
                        "backward_transform: point outside [-1, 1]: " + std::to_string(x));
        }
        out.push_back(clenshaw(coeffs.values, x));
    }
    return out;
}

OperatorMatrix deriv_matrix_tau(int n) {
    require_order(n);
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) {
        const double ck = (k == 0) ? 2.0 : 1.0;
        for (int j = k + 1; j <= n; j += 2) d(k, j) = 2.0 * j / ck;
    }
    return {std::move(d), Basis::Coefficient};
}

OperatorMatrix product_matrix_tau(const CoeffVector& v_coeffs) {
    const int n = v_coeffs.order();
    require_order(n);
    return {kernels::tau_product_matrix(v_coeffs.values), Basis::Coefficient};
}

Eigen::MatrixXd collocation_derivative_real(int n) {
    require_order(n);
    Eigen::MatrixXd d(n + 1, n + 1);
    const double half_step = pi / (2.0 * n);
    for (int i = 0; i <= n; ++i) {
        const double ci = (i == 0 || i == n) ? 2.0 : 1.0;
        double row_sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (j == i) continue;
            const double cj = (j == 0 || j == n) ? 2.0 : 1.0;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            // x_i - x_j in product form avoids cancellation between nearby nodes.
            const double diff = 2.0 * std::sin((i + j) * half_step) * std::sin((i - j) * half_step);
            d(i, j) = ci * sign / (cj * diff);
            row_sum += d(i, j);
        }
        // Negative row sum: exact on constants; equals -x/(2(1-x^2)) inside
        // and -/+ (2N^2+1)/6 at x = -1 / +1.
        d(i, i) = -row_sum;
    }
    return d;
}

OperatorMatrix deriv_matrix_collocation(int n) {
    return {collocation_derivative_real(n).cast<cplx>(), Basis::Node};
}

OperatorMatrix product_matrix_collocation(const NodeSamples& v_samples) {
    require_order(v_samples.order());
    return {v_samples.values.asDiagonal().toDenseMatrix(), Basis::Node};
}

cplx barycentric_eval(const Eigen::Ref<const Eigen::VectorXcd>& samples,
                      std::span<const double> nodes, double x) {
    const auto n = static_cast<Eigen::Index>(nodes.size()) - 1;
    if (samples.size() != n + 1) {
        throw Error(ErrorKind::Dimension, "barycentric_eval: sample/node length mismatch");
    }
    cplx numer = 0.0;
    double denom = 0.0;
    for (Eigen::Index j = 0; j <= n; ++j) {
        const double dx = x - nodes[j];
        if (dx == 0.0) return samples[j];
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == n) w *= 0.5;
        const double t = w / dx;
        numer += t * samples[j];
        denom += t;
    }
    return numer / denom;
}

Eigen::MatrixXd node_value_matrix(int n) {
    require_order(n);
    // T_k(x_j) = cos(k (N - j) pi / N); reduce the angle index mod 2N first.
    std::vector<double> table(2 * static_cast<std::size_t>(n));
    for (int m = 0; m < 2 * n; ++m) table[m] = std::cos(pi * m / n);
    Eigen::MatrixXd t(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) {
        for (int j = 0; j <= n; ++j) {
            t(j, k) = table[(static_cast<long>(k) * (n - j)) % (2 * n)];
        }
    }
    return t;
}

}  // namespace atmos::cheb
