#pragma once

// Chebyshev basis on Gauss-Lobatto nodes: quadrature, transforms and the
// operator matrices used by the Tau and Collocation discretizations.
//
// Node ordering is ascending, x_j = -cos(j*pi/N), so x_0 = -1 and x_N = +1.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace atmos {

using cplx = std::complex<double>;

/// Chebyshev expansion coefficients, length N+1.
struct CoeffVector {
    Eigen::VectorXcd values;

    [[nodiscard]] int order() const { return static_cast<int>(values.size()) - 1; }
};

/// Function values on the Gauss-Lobatto nodes, length N+1, ascending x.
struct NodeSamples {
    Eigen::VectorXcd values;

    [[nodiscard]] int order() const { return static_cast<int>(values.size()) - 1; }
};

enum class Basis { Coefficient, Node };

struct OperatorMatrix {
    Eigen::MatrixXcd values;
    Basis basis;
};

namespace cheb {

[[nodiscard]] std::vector<double> gauss_lobatto_nodes(int n);
[[nodiscard]] std::vector<double> quadrature_weights(int n);

/// Sum f(x_j) w_j, approximating the integral of f / sqrt(1 - x^2) over [-1, 1].
[[nodiscard]] cplx integrate_weighted(const NodeSamples& samples, int n);

/// Sum f(x_j) w_j sqrt(1 - x_j^2), approximating the plain integral over [-1, 1].
[[nodiscard]] cplx integrate_plain(const NodeSamples& samples, int n);

/// T_k(x) by the three-term recurrence.
[[nodiscard]] double cheb_value(int k, double x);

/// Discrete Chebyshev transform on the Gauss-Lobatto nodes.
///
/// The k = N coefficient uses normalization c_N = 2, the same as c_0: the
/// discrete inner product of T_N with itself on these nodes is pi, not pi/2.
/// With that choice the transform is the exact inverse of evaluating the
/// degree-N interpolant at the nodes.
[[nodiscard]] CoeffVector forward_transform(const NodeSamples& samples, int n);

/// Clenshaw evaluation of sum_k a_k T_k(x) at each requested point.
[[nodiscard]] std::vector<cplx> backward_transform(const CoeffVector& coeffs,
                                                   std::span<const double> x_points);

/// Clenshaw evaluation at a single point; no domain check.
[[nodiscard]] cplx clenshaw(const Eigen::Ref<const Eigen::VectorXcd>& coeffs, double x);

/// Coefficient-space derivative: strictly upper triangular, D_kj = (2/c_k) j for j > k, j + k odd.
[[nodiscard]] OperatorMatrix deriv_matrix_tau(int n);

/// Coefficient-space multiplication by v = sum v_n T_n, truncated at order N.
[[nodiscard]] OperatorMatrix product_matrix_tau(const CoeffVector& v_coeffs);

/// Node-space differentiation matrix for the ascending Gauss-Lobatto nodes.
[[nodiscard]] OperatorMatrix deriv_matrix_collocation(int n);

/// Real-valued form of deriv_matrix_collocation, used by assembly.
[[nodiscard]] Eigen::MatrixXd collocation_derivative_real(int n);

/// diag(v(x_j)).
[[nodiscard]] OperatorMatrix product_matrix_collocation(const NodeSamples& v_samples);

/// Barycentric interpolation of node samples at x in [-1, 1]; exact at the nodes.
[[nodiscard]] cplx barycentric_eval(const Eigen::Ref<const Eigen::VectorXcd>& samples,
                                    std::span<const double> nodes, double x);

/// Real matrix with entries T_k(x_j): row j, column k. Maps coefficients to node values.
[[nodiscard]] Eigen::MatrixXd node_value_matrix(int n);

}  // namespace cheb
}  // namespace atmos
