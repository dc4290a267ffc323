#pragma once

// End-to-end modal solve: assemble, reduce, eigensolve, select, normalize.

#include <optional>
#include <vector>

#include "atmos/atmosphere.hpp"
#include "atmos/discretization.hpp"
#include "atmos/eigensolve.hpp"
#include "atmos/modes_field.hpp"

namespace atmos {

struct StageTimings {
    double assemble_s = 0.0;
    double eigensolve_s = 0.0;
    double modes_s = 0.0;
    double field_s = 0.0;
};

struct SolveRequest {
    double frequency_hz = 100.0;
    int n = 1500;
    Method method = Method::Tau;
    std::optional<double> vp_min;
    std::optional<double> vp_max;
    EigenBackend backend = EigenBackend::Lapack;
};

struct ModalSolution {
    Method method;
    double omega;
    int n;
    Eigen::RowVectorXcd ground_row;  // boundary rows of the assembled system
    Eigen::RowVectorXcd top_row;
    std::vector<ModeCandidate> selected;  // sorted, windowed
    Eigen::MatrixXcd full_vectors;        // recovered, before normalization; one per selected mode
    std::vector<double> residuals;        // eigen-residual per selected mode
    std::size_t eigen_failed = 0;
    std::size_t eigen_total = 0;
    ModeSet modes;
    StageTimings timings;
};

[[nodiscard]] ModalSolution solve_modes(const AtmosphereEnv& env, const SolveRequest& req);

}  // namespace atmos
