#include "cslab/solver.hpp"

#include <cmath>
#include <limits>

#include "cslab/dyadic_walsh.hpp"
#include "cslab/errors.hpp"

namespace cslab {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIters: return "max_iters";
        case SolveStatus::InfeasibleRadius: return "infeasible_radius";
    }
    return "unknown";
}

Eigen::VectorXd SolveRequest::expand_weights(const LevelScheme& scheme, const Weights& w,
                                             Eigen::Index K) {
    const Eigen::Index r = scheme.M.size();
    if (w.omega.size() != r + 1) throw validation_error("expand_weights: expected r+1 weights");
    const Eigen::Index Mr = scheme.M(r - 1);
    if (K < Mr) throw validation_error("expand_weights: K below M_r");
    Eigen::VectorXd out(K);
    for (Eigen::Index j = 0; j < K; ++j)
        out(j) = (j < Mr) ? w.omega(scheme.sparsity_level_of(j)) : w.omega(r);
    return out;
}

namespace {

double operator_norm_estimate(const Eigen::MatrixXd& A) {
    // deterministic power iteration on A^T A (100 iterations)
    const Eigen::Index K = A.cols();
    Eigen::VectorXd v(K);
    for (Eigen::Index i = 0; i < K; ++i) v(i) = 1.0 + double(i) / double(K);
    v.normalize();
    double lambda = 0;
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd w = A.transpose() * (A * v);
        lambda = w.norm();
        if (lambda <= 0) return 0;
        v = w / lambda;
    }
    return std::sqrt(lambda);
}

} // namespace

SolveReport solve_wqcbp(const SolveRequest& req) {
    const Eigen::Index m = req.A.rows();
    const Eigen::Index K = req.A.cols();
    if (req.y.size() != m) throw validation_error("solve_wqcbp: y length mismatch");
    if (req.weights.size() != K) throw validation_error("solve_wqcbp: weights length mismatch");
    if ((req.weights.array() <= 0).any())
        throw validation_error("solve_wqcbp: weights must be positive");
    if (req.eta_total < 0) throw validation_error("solve_wqcbp: negative radius");
    if (req.tol_feas <= 0 || req.tol_gap <= 0)
        throw validation_error("solve_wqcbp: tolerances must be positive");

    SolveReport rep;
    rep.gap_estimate = std::numeric_limits<double>::infinity();

    // zero is feasible (and optimal) when the data already fits the radius
    if (req.y.norm() <= req.eta_total) {
        rep.xhat = Eigen::VectorXd::Zero(K);
        rep.residual_norm = req.y.norm();
        rep.objective = 0;
        rep.gap_estimate = 0;
        rep.status = SolveStatus::Converged;
        return rep;
    }

    const double L = std::max(operator_norm_estimate(req.A) * 1.02, 1e-12);
    const double tau = 0.95 / L;
    const double sigma = 0.95 / L;

    Eigen::VectorXd z = Eigen::VectorXd::Zero(K);
    Eigen::VectorXd zbar = z;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(m);

    Eigen::VectorXd best_x;
    double best_obj = std::numeric_limits<double>::infinity();
    double best_residual = std::numeric_limits<double>::infinity();
    double lower = 0; // objective is nonnegative
    const double feas_slack = req.eta_total * (1.0 + req.tol_feas);
    const Eigen::Index check_every = 16;

    Eigen::Index it = 0;
    for (; it < req.max_iters; ++it) {
        // dual: prox of sigma (eta |p| + <p, y>) is a shrink of p + sigma(A zbar - y)
        Eigen::VectorXd q = p + sigma * (req.A * zbar - req.y);
        const double qn = q.norm();
        p = (qn > 0) ? Eigen::VectorXd(q * std::max(0.0, 1.0 - sigma * req.eta_total / qn))
                     : q;

        // primal: levelwise soft thresholding with threshold tau * omega
        Eigen::VectorXd znew = z - tau * (req.A.transpose() * p);
        for (Eigen::Index i = 0; i < K; ++i) {
            const double t = tau * req.weights(i);
            const double v = znew(i);
            znew(i) = (v > t) ? v - t : (v < -t ? v + t : 0.0);
        }
        zbar = 2.0 * znew - z;
        z = std::move(znew);

        if ((it + 1) % check_every == 0 || it + 1 == req.max_iters) {
            const double residual = (req.A * z - req.y).norm();
            if (residual <= feas_slack) {
                const double obj = (req.weights.array() * z.array().abs()).sum();
                if (obj < best_obj) {
                    best_obj = obj;
                    best_x = z;
                    best_residual = residual;
                }
            } else if (residual < best_residual && best_x.size() == 0) {
                best_residual = residual;
            }
            // dual lower bound from the scaled-feasible dual point
            const Eigen::VectorXd atp = req.A.transpose() * p;
            double scale = 1.0;
            for (Eigen::Index i = 0; i < K; ++i)
                scale = std::max(scale, std::abs(atp(i)) / req.weights(i));
            const Eigen::VectorXd pf = p / scale;
            lower = std::max(lower, -pf.dot(req.y) - req.eta_total * pf.norm());
            if (best_x.size() > 0) {
                rep.gap_estimate = best_obj - lower;
                if (rep.gap_estimate <= req.tol_gap * std::max(1.0, best_obj)) {
                    rep.status = SolveStatus::Converged;
                    ++it;
                    break;
                }
            }
        }
    }

    rep.iterations = it;
    if (best_x.size() > 0) {
        rep.xhat = best_x;
        rep.objective = best_obj;
        rep.residual_norm = (req.A * best_x - req.y).norm();
        rep.gap_estimate = best_obj - lower;
        if (rep.status != SolveStatus::Converged) rep.status = SolveStatus::MaxIters;
    } else {
        rep.xhat = z;
        rep.residual_norm = (req.A * z - req.y).norm();
        rep.objective = (req.weights.array() * z.array().abs()).sum();
        rep.status = SolveStatus::InfeasibleRadius;
    }
    return rep;
}

GridFunction solve_findim_baseline(const WaveletSystem& sys, int grid_depth, int dwt_J0,
                                   const std::vector<int>& sample_rows,
                                   const Eigen::VectorXd& y, double eta, SolveReport* report) {
    const Eigen::Index n = Eigen::Index(1) << grid_depth;
    if (y.size() != Eigen::Index(sample_rows.size()))
        throw validation_error("solve_findim_baseline: measurement length mismatch");

    // B = P_Omega V Psi^{-1} with V the orthonormal Hadamard matrix; columns
    // assembled by synthesizing each discrete wavelet basis vector.
    const double scale = std::pow(0.5, 0.5 * grid_depth);
    Eigen::MatrixXd VPsiT(Eigen::Index(sample_rows.size()), n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(j) = 1.0;
        const Eigen::VectorXd col = dwt_periodic_synthesis(sys, e, dwt_J0);
        const Eigen::VectorXd had = fwht_sequency(col, FwhtNorm::Unnormalized) * scale;
        for (std::size_t i = 0; i < sample_rows.size(); ++i) {
            const int row = sample_rows[i];
            if (row < 0 || row >= n)
                throw validation_error("solve_findim_baseline: sample row out of range");
            VPsiT(Eigen::Index(i), j) = had(row);
        }
    }

    SolveRequest req;
    req.A = std::move(VPsiT);
    req.y = y;
    req.eta_total = eta;
    req.weights = Eigen::VectorXd::Ones(n);
    const SolveReport rep = solve_wqcbp(req);
    if (report) *report = rep;
    return GridFunction(grid_depth, dwt_periodic_synthesis(sys, rep.xhat, dwt_J0));
}

} // namespace cslab
