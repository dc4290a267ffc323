#include "atmos/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "atmos/error.hpp"
#include "atmos/kernels.hpp"

namespace atmos {
namespace {

void require_assembly_order(int n) {
    if (n < 8) {
        throw Error(ErrorKind::InvalidTruncation,
                    "assembly needs N >= 8, got " + std::to_string(n));
    }
}

}  // namespace

const char* to_string(Method m) noexcept {
    return m == Method::Tau ? "tau" : "collocation";
}

NodeProfiles sample_node_profiles(const AtmosphereEnv& env, double omega, int n) {
    NodeProfiles out;
    out.x = cheb::gauss_lobatto_nodes(n);
    out.k2.resize(n + 1);
    out.rho.resize(n + 1);
    out.inv_rho.resize(n + 1);
    const double top = env.top();
    for (int j = 0; j <= n; ++j) {
        // Clamp guards the endpoints against rounding in the affine map.
        const double z = std::clamp(z_from_x(out.x[j], top), 0.0, top);
        const cplx k = complex_wavenumber(env, z, omega);
        const double rho = env.sample(z).rho;
        out.k2[j] = k * k;
        out.rho[j] = rho;
        out.inv_rho[j] = 1.0 / rho;
    }
    return out;
}

AssembledSystem assemble_tau(const AtmosphereEnv& env, double omega, int n) {
    require_assembly_order(n);
    const auto prof = sample_node_profiles(env, omega, n);
    const double top = env.top();
    const auto bc = boundary_constants(env, omega);

    const CoeffVector v_hat = cheb::forward_transform({prof.k2}, n);
    const CoeffVector rho_hat = cheb::forward_transform({prof.rho}, n);
    const CoeffVector g_hat = cheb::forward_transform({prof.inv_rho}, n);

    const Eigen::MatrixXcd c_rho = kernels::tau_product_matrix(rho_hat.values);
    const Eigen::MatrixXcd c_g = kernels::tau_product_matrix(g_hat.values);
    const Eigen::MatrixXcd c_v = kernels::tau_product_matrix(v_hat.values);

    // C_rho D C_g D, with both derivative applications done by recurrence.
    const Eigen::MatrixXcd inner = kernels::tau_derivative_left(kernels::tau_derivative_right(c_g));
    Eigen::MatrixXcd op = (4.0 / (top * top)) * (c_rho * inner);
    op += c_v;

    // t1 = [T_k(-1)] = (-1)^k, t2 = [T_k(1)] = 1; t D is the row of endpoint derivatives.
    Eigen::MatrixXcd t(2, n + 1);
    for (int k = 0; k <= n; ++k) {
        t(0, k) = (k % 2 == 0) ? 1.0 : -1.0;
        t(1, k) = 1.0;
    }
    const Eigen::MatrixXcd td = kernels::tau_derivative_right(t);
    Eigen::RowVectorXcd ground = (2.0 / top) * td.row(0) + bc.ground * t.row(0);
    Eigen::RowVectorXcd top_row = (2.0 / top) * td.row(1) + bc.top * t.row(1);

    return {std::move(op), std::move(ground), std::move(top_row), Method::Tau, n, top};
}

AssembledSystem assemble_collocation(const AtmosphereEnv& env, double omega, int n) {
    require_assembly_order(n);
    const auto prof = sample_node_profiles(env, omega, n);
    const double top = env.top();
    const auto bc = boundary_constants(env, omega);

    const Eigen::MatrixXd d = cheb::collocation_derivative_real(n);
    const Eigen::VectorXd rho = prof.rho.real();
    const Eigen::VectorXd inv_rho = prof.inv_rho.real();

    // C_rho D C_g D: the diagonal factors become row scalings.
    const Eigen::MatrixXd g_d = inv_rho.asDiagonal() * d;
    const Eigen::MatrixXd d_g_d = d * g_d;
    Eigen::MatrixXcd op = ((4.0 / (top * top)) * (rho.asDiagonal() * d_g_d)).cast<cplx>();
    op.diagonal() += prof.k2;

    Eigen::RowVectorXcd ground = ((2.0 / top) * d.row(0)).cast<cplx>();
    ground[0] += bc.ground;
    Eigen::RowVectorXcd top_row = ((2.0 / top) * d.row(n)).cast<cplx>();
    top_row[n] += bc.top;

    return {std::move(op), std::move(ground), std::move(top_row), Method::Collocation, n, top};
}

AssembledSystem assemble(const AtmosphereEnv& env, double omega, int n, Method method) {
    return method == Method::Tau ? assemble_tau(env, omega, n) : assemble_collocation(env, omega, n);
}

ReducedEigenproblem reduce_system(const AssembledSystem& sys) {
    const int n = sys.n;
    const Eigen::Index size = n + 1;
    if (sys.op.rows() != size || sys.op.cols() != size || sys.ground.size() != size ||
        sys.top.size() != size) {
        throw Error(ErrorKind::Dimension, "reduce_system: inconsistent system dimensions");
    }

    // Original row indices holding the ground/top equations, and the order
    // that moves boundary unknowns into the trailing 2 x 2 block.
    std::vector<int> perm(size);
    int ground_row = n - 1;
    int top_row = n;
    if (sys.method == Method::Tau) {
        for (int i = 0; i <= n; ++i) perm[i] = i;
    } else {
        ground_row = 0;
        for (int i = 0; i < n - 1; ++i) perm[i] = i + 1;
        perm[n - 1] = 0;
        perm[n] = n;
    }

    Eigen::MatrixXcd full = sys.op;
    full.row(ground_row) = sys.ground;
    full.row(top_row) = sys.top;

    Eigen::MatrixXcd permuted(size, size);
    for (Eigen::Index j = 0; j < size; ++j) {
        for (Eigen::Index i = 0; i < size; ++i) permuted(i, j) = full(perm[i], perm[j]);
    }

    const Eigen::Index m = n - 1;
    const Eigen::Matrix2cd l22 = permuted.bottomRightCorner<2, 2>();
    const cplx det = l22(0, 0) * l22(1, 1) - l22(0, 1) * l22(1, 0);
    const double scale = l22.squaredNorm();
    if (!(std::abs(det) >= 1e-14 * scale) || scale == 0.0) {
        throw Error(ErrorKind::Elimination,
                    std::string("boundary block singular: ground and top rows (") + to_string(sys.method) +
                        ") do not determine the boundary unknowns, |det| = " + std::to_string(std::abs(det)));
    }
    Eigen::Matrix2cd l22_inv;
    l22_inv << l22(1, 1), -l22(0, 1), -l22(1, 0), l22(0, 0);
    l22_inv /= det;

    Eigen::MatrixXcd recovery = -l22_inv * permuted.bottomLeftCorner(2, m);
    Eigen::MatrixXcd a = permuted.topLeftCorner(m, m);
    a.noalias() += permuted.topRightCorner(m, 2) * recovery;

    return {std::move(a), std::move(recovery), std::move(perm), sys.method, n};
}

Eigen::MatrixXcd recover_full_vectors(const Eigen::Ref<const Eigen::MatrixXcd>& interior,
                                      const ReducedEigenproblem& red) {
    const Eigen::Index m = red.n - 1;
    if (interior.rows() != m) {
        throw Error(ErrorKind::Dimension, "recover_full_vector: expected " + std::to_string(m) +
                                              " interior entries, got " + std::to_string(interior.rows()));
    }
    Eigen::MatrixXcd permuted(m + 2, interior.cols());
    permuted.topRows(m) = interior;
    permuted.bottomRows(2) = red.recovery * interior;
    Eigen::MatrixXcd out(m + 2, interior.cols());
    for (Eigen::Index i = 0; i < m + 2; ++i) out.row(red.permutation[i]) = permuted.row(i);
    return out;
}

Eigen::VectorXcd recover_full_vector(const Eigen::Ref<const Eigen::VectorXcd>& interior,
                                     const ReducedEigenproblem& red) {
    return recover_full_vectors(interior, red).col(0);
}

}  // namespace atmos
