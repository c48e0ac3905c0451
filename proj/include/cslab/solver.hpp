#pragma once

#include <Eigen/Dense>

#include "cslab/analysis.hpp"
#include "cslab/grid_function.hpp"

namespace cslab {

enum class SolveStatus { Converged, MaxIters, InfeasibleRadius };

const char* to_string(SolveStatus s);

/// Weighted quadratically-constrained basis pursuit:
///   minimize |z|_{1,omega}  subject to  |A z - y|_2 <= eta_total.
struct SolveRequest {
    Eigen::MatrixXd A;           ///< m x K
    Eigen::VectorXd y;           ///< m
    double eta_total = 0;        ///< constraint radius (eta + eta')
    Eigen::VectorXd weights;     ///< per-index weights, length K, positive
    double tol_feas = 1e-6;      ///< relative feasibility slack
    double tol_gap = 1e-6;       ///< relative optimality gap
    Eigen::Index max_iters = 200000;

    /// Expands per-level weights over [0, K) with the tail block (M_r, K]
    /// carrying omega_{r+1}.
    static Eigen::VectorXd expand_weights(const LevelScheme& scheme, const Weights& w,
                                          Eigen::Index K);
};

struct SolveReport {
    Eigen::VectorXd xhat;
    double residual_norm = 0;
    double objective = 0;
    double gap_estimate = 0;
    Eigen::Index iterations = 0;
    SolveStatus status = SolveStatus::MaxIters;
};

/// Deterministic primal-dual (Chambolle-Pock) iteration: levelwise soft
/// thresholding against the weighted norm, dual shrinkage for the residual
/// ball, zero initialization, steps from a 100-iteration power estimate of
/// |A|.  Returns the best feasible iterate seen.
SolveReport solve_wqcbp(const SolveRequest& req);

/// Finite-dimensional baseline (the discrete 2^r x 2^r model): unweighted
/// QCBP with the orthonormal sequency Hadamard matrix and a periodic
/// discrete wavelet transform; the result is returned as grid values, which
/// deliberately commits the wavelet crime for the demonstration.
/// `sample_rows` are 0-based rows of the orthonormal Hadamard matrix; y
/// holds the corresponding measurements on the discrete scale.
GridFunction solve_findim_baseline(const WaveletSystem& sys, int grid_depth, int dwt_J0,
                                   const std::vector<int>& sample_rows,
                                   const Eigen::VectorXd& y, double eta,
                                   SolveReport* report = nullptr);

} // namespace cslab
