#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cslab/change_of_basis.hpp"

namespace cslab {

/// Sampling levels (N, m) and sparsity levels (M, s) with r0 saturated
/// sampling levels.  All bandwidth vectors are strictly increasing; local
/// counts never exceed their level widths.
struct LevelScheme {
    Eigen::VectorXi N; ///< sampling bandwidths, N_1 < ... < N_r
    Eigen::VectorXi m; ///< local sample counts (may be empty until allocated)
    Eigen::VectorXi M; ///< sparsity bandwidths
    Eigen::VectorXi s; ///< local sparsities
    int r0 = 0;        ///< first r0 sampling levels are fully sampled

    int levels() const { return int(N.size()); }
    int sampling_width(int k) const { return N(k) - (k == 0 ? 0 : N(k - 1)); }
    int sparsity_width(int l) const { return M(l) - (l == 0 ? 0 : M(l - 1)); }

    /// Level k (0-based) containing 0-based row n, i.e. N_{k-1} <= n < N_k.
    int sampling_level_of(Eigen::Index n) const;
    /// Level l (0-based) containing 0-based column j.
    int sparsity_level_of(Eigen::Index j) const;

    /// Throws validation_error on any violated invariant; `require_m` also
    /// checks the m vector (size, bounds, saturation of the first r0 levels).
    void validate(bool require_m) const;
};

/// Rows drawn per level; repeats allowed (sampling is with replacement, and
/// duplicate rows are kept as distinct measurement rows so m_k is literal).
struct SamplingPattern {
    std::vector<std::vector<int>> rows; ///< per level: 0-based row indices in [N_{k-1}, N_k)
    Eigen::VectorXd p;                  ///< p_k = m_k / (N_k - N_{k-1})
    std::uint64_t seed = 0;

    Eigen::Index total_rows() const;
    /// Flattened rows with the 1/sqrt(p_k) scale attached to each.
    std::vector<std::pair<int, double>> scaled_rows() const;
};

/// Saturated levels (k < r0, or m_k equal to the level width) take the full
/// range; other levels draw m_k rows i.i.d. uniformly with replacement.
/// Deterministic given the seed.
SamplingPattern draw_pattern(const LevelScheme& scheme, std::uint64_t seed);

void write_pattern_csv(const SamplingPattern& pattern, const std::string& path);

/// Scaled measurement operator H = diag(1/sqrt(p_k)) P_Omega U with data
/// fidelity bandwidth K.  The section provides U columns out to at least K
/// (more, if measurement simulation needs signals beyond K).
struct MeasurementOperator {
    SamplingPattern pattern;
    SectionMatrix section;
    Eigen::Index K = 0;

    Eigen::Index measurement_count() const { return pattern.total_rows(); }

    /// Dense A = H P_K restricted to the pattern rows (m x K).
    Eigen::MatrixXd dense_matrix() const;

    Eigen::VectorXd apply(const Eigen::VectorXd& z) const;         ///< A z, z on K
    Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& w) const; ///< A^T w
};

MeasurementOperator make_operator(const LevelScheme& scheme, const SamplingPattern& pattern,
                                  SectionMatrix section, Eigen::Index K);

struct MeasureResult {
    Eigen::VectorXd ytilde;     ///< D P_Omega U x + e1
    Eigen::VectorXd truncation; ///< H P_K^perp x (zero when x lives inside K)
};

/// Simulates scaled noisy measurements of a coefficient vector x (its length
/// may exceed K up to the section's column count).
MeasureResult measure(const MeasurementOperator& op, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& e1);

/// Sample allocation for the dyadic Walsh-wavelet coherence profile:
/// m_k = min(width_k, ceil(C_univ * delta^-2 * theta^-1 * 2^(q*max(k+1-r,0))
///           * sum_l 2^-|k-l| s_l * L)) with
/// L = r log(2 m~) log(2N) log^2(2s) + log(1/eps); the m~ inside L is
/// resolved by fixed-point iteration (at most 8 passes, then full
/// saturation).  Saturated levels are forced to their full width.
Eigen::VectorXi allocate_samples(const LevelScheme& scheme, double delta, double theta,
                                 double eps, int q, double c_univ);

/// Same with explicit local coherences: bracket sum_l mu[k][l] s_l and
/// prefactor delta^-2 * g_inv_norm^2 * width_k.
Eigen::VectorXi general_allocate(const LevelScheme& scheme, const Eigen::MatrixXd& mu,
                                 double delta, double g_inv_norm, double eps, double c_univ);

/// The log factor L evaluated at a given m~ (exposed for audit output).
double allocation_log_factor(const LevelScheme& scheme, double m_tilde, double eps);

} // namespace cslab
