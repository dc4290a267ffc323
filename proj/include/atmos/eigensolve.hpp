#pragma once

// Dense complex eigensolve, wavenumber branch selection and phase-velocity
// windowing of modal candidates.

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace atmos {

using cplx = std::complex<double>;

enum class EigenBackend { Lapack, Eigen };

struct EigenPairs {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;         // one unit-norm eigenvector per column
    std::vector<double> residuals;    // ||A v - lambda v|| / (||A|| ||v||)
    std::size_t failed = 0;           // pairs dropped for violating the residual contract
};

inline constexpr double kEigenResidualTolerance = 1e-8;

/// All eigenpairs of A whose relative residual is at most 1e-8.
/// Throws EigenSolve when more than 1% of the pairs fail. The LAPACK path
/// falls back to Eigen's ComplexEigenSolver if zgeev does not converge.
[[nodiscard]] EigenPairs solve_dense_eigenproblem(const Eigen::Ref<const Eigen::MatrixXcd>& a,
                                                  EigenBackend backend = EigenBackend::Lapack);

/// Principal square root, sign chosen so Re(kr) >= 0 (Im(kr) >= 0 on ties).
[[nodiscard]] cplx wavenumber_from_eigenvalue(cplx kr2);

struct ModeCandidate {
    cplx kr2;
    cplx kr;
    Eigen::VectorXcd vec;   // interior eigenvector; the full vector is rebuilt on selection
    double phase_velocity;  // omega / Re(kr)
    std::size_t index;      // position in the solver output
};

[[nodiscard]] std::vector<ModeCandidate> make_candidates(const EigenPairs& pairs, double omega);

/// Keep Re(kr) > 0 and omega / Re(kr) in [vp_min, vp_max]; order by
/// descending Re(kr), then descending Im(kr), then input index.
[[nodiscard]] std::vector<ModeCandidate> sort_filter_modes(std::vector<ModeCandidate> cands, double omega,
                                                           std::optional<double> vp_min,
                                                           std::optional<double> vp_max);

/// Limit BLAS and OpenMP to `threads` (>= 1).
void set_thread_limit(int threads);

}  // namespace atmos
