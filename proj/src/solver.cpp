#include "atmos/solver.hpp"

#include <chrono>
#include <numbers>
#include <string>

#include "atmos/error.hpp"

namespace atmos {
namespace {

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

template <class F>
auto in_stage(const char* stage, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("[") + stage + "] " + e.what());
    }
}

}  // namespace

ModalSolution solve_modes(const AtmosphereEnv& env, const SolveRequest& req) {
    const double omega = 2.0 * std::numbers::pi * req.frequency_hz;
    ModalSolution sol{req.method, omega, req.n, {}, {}, {}, {}, {}, 0, 0, {}, {}};
    Stopwatch clock;

    const AssembledSystem sys = in_stage("assemble", [&] { return assemble(env, omega, req.n, req.method); });
    const ReducedEigenproblem red = in_stage("reduce", [&] { return reduce_system(sys); });
    sol.ground_row = sys.ground;
    sol.top_row = sys.top;
    const Eigen::VectorXd rho = sample_node_profiles(env, omega, req.n).rho.real();
    sol.timings.assemble_s = clock.lap();

    const EigenPairs pairs =
        in_stage("eigensolve", [&] { return solve_dense_eigenproblem(red.matrix, req.backend); });
    sol.eigen_failed = pairs.failed;
    sol.eigen_total = static_cast<std::size_t>(red.matrix.rows());
    sol.timings.eigensolve_s = clock.lap();

    sol.selected = sort_filter_modes(make_candidates(pairs, omega), omega, req.vp_min, req.vp_max);
    Eigen::MatrixXcd interior(red.matrix.rows(), static_cast<Eigen::Index>(sol.selected.size()));
    std::vector<cplx> kr;
    kr.reserve(sol.selected.size());
    for (std::size_t m = 0; m < sol.selected.size(); ++m) {
        interior.col(static_cast<Eigen::Index>(m)) = sol.selected[m].vec;
        kr.push_back(sol.selected[m].kr);
        sol.residuals.push_back(pairs.residuals[sol.selected[m].index]);
    }
    in_stage("modes", [&] {
        sol.full_vectors = recover_full_vectors(interior, red);
        sol.modes = build_mode_set(sol.full_vectors, kr, req.method, omega, env.top(), rho);
        return 0;
    });
    sol.timings.modes_s = clock.lap();
    return sol;
}

}  // namespace atmos
