#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version in
// atmos::kernels and a plain serial version in atmos::kernels::reference;
// the serial versions are written independently (different loop order or
// formulation) and exist for testing and benchmarking.
//
// All OpenMP kernels partition over an outer index only, and every output
// element is accumulated in a fixed order, so results do not depend on the
// thread count.

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace atmos::kernels {

using cplx = std::complex<double>;

/// Discrete Chebyshev transform of node samples (ascending nodes).
[[nodiscard]] Eigen::VectorXcd forward_transform(const Eigen::Ref<const Eigen::VectorXcd>& samples);

/// Dense coefficient-space product matrix for v = sum v_n T_n.
[[nodiscard]] Eigen::MatrixXcd tau_product_matrix(const Eigen::Ref<const Eigen::VectorXcd>& v);

/// D_tau * X using suffix sums by parity, O(N) per column.
[[nodiscard]] Eigen::MatrixXcd tau_derivative_left(const Eigen::Ref<const Eigen::MatrixXcd>& x);

/// X * D_tau using prefix sums by parity, O(N) per row.
[[nodiscard]] Eigen::MatrixXcd tau_derivative_right(const Eigen::Ref<const Eigen::MatrixXcd>& x);

/// Values of Chebyshev series (one per column of coeffs) at points x; result is points x series.
[[nodiscard]] Eigen::MatrixXcd evaluate_series(const Eigen::Ref<const Eigen::MatrixXcd>& coeffs,
                                               std::span<const double> x);

/// Barycentric interpolation of node samples (one series per column) at points x.
[[nodiscard]] Eigen::MatrixXcd evaluate_nodal(const Eigen::Ref<const Eigen::MatrixXcd>& samples,
                                              std::span<const double> x);

/// p(r, z) = sqrt(2 pi) sum_m src_m recv(z, m) exp(i kr_m r) / sqrt(kr_m r).
/// Result is ranges x heights; the sum runs over m in ascending order.
[[nodiscard]] Eigen::MatrixXcd synthesize_field(const Eigen::Ref<const Eigen::VectorXcd>& kr,
                                                const Eigen::Ref<const Eigen::VectorXcd>& src,
                                                const Eigen::Ref<const Eigen::MatrixXcd>& recv,
                                                std::span<const double> ranges);

namespace reference {

Eigen::VectorXcd forward_transform(const Eigen::Ref<const Eigen::VectorXcd>& samples);
Eigen::MatrixXcd tau_product_matrix(const Eigen::Ref<const Eigen::VectorXcd>& v);
Eigen::MatrixXcd tau_derivative_left(const Eigen::Ref<const Eigen::MatrixXcd>& x);
Eigen::MatrixXcd tau_derivative_right(const Eigen::Ref<const Eigen::MatrixXcd>& x);
Eigen::MatrixXcd evaluate_series(const Eigen::Ref<const Eigen::MatrixXcd>& coeffs,
                                 std::span<const double> x);
Eigen::MatrixXcd evaluate_nodal(const Eigen::Ref<const Eigen::MatrixXcd>& samples,
                                std::span<const double> x);
Eigen::MatrixXcd synthesize_field(const Eigen::Ref<const Eigen::VectorXcd>& kr,
                                  const Eigen::Ref<const Eigen::VectorXcd>& src,
                                  const Eigen::Ref<const Eigen::MatrixXcd>& recv,
                                  std::span<const double> ranges);

}  // namespace reference
}  // namespace atmos::kernels
