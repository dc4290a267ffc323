#pragma once

// Assembly of the discrete modal operator for the Tau and Collocation
// methods, and reduction to a standard (N-1) x (N-1) eigenproblem by
// eliminating the two boundary unknowns.

#include <vector>

#include <Eigen/Dense>

#include "atmos/atmosphere.hpp"
#include "atmos/chebyshev.hpp"

namespace atmos {

enum class Method { Tau, Collocation };

[[nodiscard]] const char* to_string(Method m) noexcept;

struct AssembledSystem {
    Eigen::MatrixXcd op;         // L, (N+1) x (N+1)
    Eigen::RowVectorXcd ground;  // p: ground boundary row
    Eigen::RowVectorXcd top;     // q: top boundary row
    Method method;
    int n;
    double height;  // H

    [[nodiscard]] Basis basis() const {
        return method == Method::Tau ? Basis::Coefficient : Basis::Node;
    }
};

struct ReducedEigenproblem {
    Eigen::MatrixXcd matrix;    // A = L11 - L12 L22^-1 L21
    Eigen::MatrixXcd recovery;  // -L22^-1 L21, 2 x (N-1)
    /// permutation[i] is the original index placed at position i.
    std::vector<int> permutation;
    Method method;
    int n;
};

[[nodiscard]] AssembledSystem assemble_tau(const AtmosphereEnv& env, double omega, int n);
[[nodiscard]] AssembledSystem assemble_collocation(const AtmosphereEnv& env, double omega, int n);
[[nodiscard]] AssembledSystem assemble(const AtmosphereEnv& env, double omega, int n, Method method);

/// Profile values at the Gauss-Lobatto nodes mapped to heights.
struct NodeProfiles {
    std::vector<double> x;
    Eigen::VectorXcd k2;   // k(z)^2
    Eigen::VectorXcd rho;
    Eigen::VectorXcd inv_rho;
};

[[nodiscard]] NodeProfiles sample_node_profiles(const AtmosphereEnv& env, double omega, int n);

/// Replace the boundary rows, permute boundary unknowns to the trailing
/// block and eliminate them.
[[nodiscard]] ReducedEigenproblem reduce_system(const AssembledSystem& sys);

/// Rebuild the full N+1 vector (coefficients or node samples) from an
/// interior eigenvector.
[[nodiscard]] Eigen::VectorXcd recover_full_vector(const Eigen::Ref<const Eigen::VectorXcd>& interior,
                                                   const ReducedEigenproblem& red);

/// Column-wise recover_full_vector.
[[nodiscard]] Eigen::MatrixXcd recover_full_vectors(const Eigen::Ref<const Eigen::MatrixXcd>& interior,
                                                    const ReducedEigenproblem& red);

}  // namespace atmos
