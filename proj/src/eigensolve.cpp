#include "atmos/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <lapacke.h>
#include <omp.h>

#include "atmos/error.hpp"

extern "C" void openblas_set_num_threads(int);

namespace atmos {
namespace {

bool lapack_eigen(const Eigen::Ref<const Eigen::MatrixXcd>& a, Eigen::VectorXcd& values,
                  Eigen::MatrixXcd& vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXcd work = a;  // zgeev overwrites its input
    values.resize(n);
    vectors.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'V', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
        reinterpret_cast<lapack_complex_double*>(values.data()), nullptr, 1,
        reinterpret_cast<lapack_complex_double*>(vectors.data()), n);
    if (info < 0) {
        throw Error(ErrorKind::EigenSolve, "zgeev: illegal argument " + std::to_string(-info));
    }
    return info == 0;
}

void eigen_eigen(const Eigen::Ref<const Eigen::MatrixXcd>& a, Eigen::VectorXcd& values,
                 Eigen::MatrixXcd& vectors) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, true);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::EigenSolve, "ComplexEigenSolver did not converge");
    }
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
}

}  // namespace

EigenPairs solve_dense_eigenproblem(const Eigen::Ref<const Eigen::MatrixXcd>& a, EigenBackend backend) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::Dimension, "eigenproblem matrix is not square");
    if (!a.allFinite()) throw Error(ErrorKind::EigenSolve, "eigenproblem matrix has non-finite entries");
    const Eigen::Index n = a.rows();
    EigenPairs out;
    if (n == 0) return out;

    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;
    if (backend == EigenBackend::Lapack) {
        if (!lapack_eigen(a, values, vectors)) eigen_eigen(a, values, vectors);
    } else {
        eigen_eigen(a, values, vectors);
    }

    const double a_norm = a.norm();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double len = vectors.col(j).norm();
        if (len > 0.0) vectors.col(j) /= len;
    }
    Eigen::MatrixXcd av = a * vectors;
    std::vector<Eigen::Index> keep;
    std::vector<double> residuals;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double res = (av.col(j) - values[j] * vectors.col(j)).norm();
        const double rel = (a_norm > 0.0) ? res / a_norm : res;
        const bool ok = std::isfinite(rel) && vectors.col(j).norm() > 0.0 && rel <= kEigenResidualTolerance;
        if (ok) {
            keep.push_back(j);
            residuals.push_back(rel);
        }
    }
    out.failed = static_cast<std::size_t>(n) - keep.size();
    if (static_cast<double>(out.failed) > 0.01 * static_cast<double>(n)) {
        throw Error(ErrorKind::EigenSolve, std::to_string(out.failed) + " of " + std::to_string(n) +
                                               " eigenpairs violate the residual bound");
    }
    out.values.resize(static_cast<Eigen::Index>(keep.size()));
    out.vectors.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.values[static_cast<Eigen::Index>(i)] = values[keep[i]];
        out.vectors.col(static_cast<Eigen::Index>(i)) = vectors.col(keep[i]);
    }
    out.residuals = std::move(residuals);
    return out;
}

cplx wavenumber_from_eigenvalue(cplx kr2) {
    cplx kr = std::sqrt(kr2);
    if (kr.real() < 0.0 || (kr.real() == 0.0 && kr.imag() < 0.0)) kr = -kr;
    return kr;
}

std::vector<ModeCandidate> make_candidates(const EigenPairs& pairs, double omega) {
    std::vector<ModeCandidate> out;
    out.reserve(static_cast<std::size_t>(pairs.values.size()));
    for (Eigen::Index j = 0; j < pairs.values.size(); ++j) {
        const cplx kr = wavenumber_from_eigenvalue(pairs.values[j]);
        const double vp = kr.real() > 0.0 ? omega / kr.real() : std::numeric_limits<double>::infinity();
        out.push_back({pairs.values[j], kr, pairs.vectors.col(j), vp, static_cast<std::size_t>(j)});
    }
    return out;
}

std::vector<ModeCandidate> sort_filter_modes(std::vector<ModeCandidate> cands, double omega,
                                             std::optional<double> vp_min, std::optional<double> vp_max) {
    if (!(omega > 0.0)) throw Error(ErrorKind::Domain, "angular frequency must be > 0");
    std::vector<ModeCandidate> kept;
    for (auto& c : cands) {
        if (!(c.kr.real() > 0.0)) continue;
        c.phase_velocity = omega / c.kr.real();
        if (vp_min && c.phase_velocity < *vp_min) continue;
        if (vp_max && c.phase_velocity > *vp_max) continue;
        kept.push_back(std::move(c));
    }
    std::sort(kept.begin(), kept.end(), [](const ModeCandidate& a, const ModeCandidate& b) {
        if (a.kr.real() != b.kr.real()) return a.kr.real() > b.kr.real();
        if (a.kr.imag() != b.kr.imag()) return a.kr.imag() > b.kr.imag();
        return a.index < b.index;
    });
    return kept;
}

void set_thread_limit(int threads) {
    threads = std::max(1, threads);
    openblas_set_num_threads(threads);
    omp_set_num_threads(threads);
}

}  // namespace atmos
