#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cslab/sampling.hpp"

namespace cslab {

/// Local coherences mu[k][l] = max |U_ij|^2 over the (sampling band k) x
/// (sparsity band l) block.
struct CoherenceTable {
    Eigen::MatrixXd mu; ///< levels x levels

    /// Ratio layout of the printed tables: entry (k, l), with k = 2..rows,
    /// holding mu_{k,l} / mu_{k+1,l}.
    Eigen::MatrixXd ratios() const;
};

/// Square root G of the truncated Gram P_M U* P_N U P_M together with the
/// balancing constant theta = 1 - |Gram - I|_2.  Since the Gram is dominated
/// by the identity, theta equals its smallest eigenvalue.
struct GramRoot {
    Eigen::MatrixXd G;
    Eigen::VectorXd eigenvalues; ///< of G^2, ascending
    double theta = 0;
    double g_inv_norm = 0; ///< |G^-1|_2, from the eigendecomposition directly

    double g_norm() const { return std::sqrt(std::max(eigenvalues(eigenvalues.size() - 1), 0.0)); }
    double condition() const { return g_norm() * g_inv_norm; }
    bool balanced() const { return theta > 0; }
};

/// Per-level weights omega_1..omega_{r+1}; the last one covers the tail
/// block (M_r, K].
struct Weights {
    Eigen::VectorXd omega;

    static Weights unweighted(int r);
    /// omega_l = s_l^{-1/2} for l <= r; omega_{r+1} = tail.
    static Weights inverse_sqrt(const Eigen::VectorXi& s, double tail);
};

/// S_{omega,s} = sum_l omega_l^2 s_l over the r sparsity levels.
double weighted_sparsity(const Weights& w, const Eigen::VectorXi& s);
/// zeta_{s,omega} = min_l omega_l^2 s_l.
double weighted_sparsity_floor(const Weights& w, const Eigen::VectorXi& s);

/// Enumerates the maximal supports of E_{s,M} (per level exactly s_l
/// indices).  Sufficient for suprema of support-monotone objectives.
struct SupportFamily {
    Eigen::VectorXi M, s;

    std::uint64_t count() const; ///< product of binomials (saturates)
    void for_each(const std::function<void(const std::vector<int>&)>& fn) const;
};

/// Exact blockwise maxima of squared entries of an assembled section.
CoherenceTable local_coherence(const SectionMatrix& sec, const LevelScheme& scheme);

/// Same table computed one column at a time (nothing dense materialized);
/// for bandwidths where a full section would not fit in memory.
CoherenceTable local_coherence_streamed(const WaveletSystem& sys, const LevelScheme& scheme,
                                        int quality);

/// Gram root and balancing constant of P_N U P_M taken from a section.
GramRoot balancing(const SectionMatrix& sec, Eigen::Index N, Eigen::Index M);

struct BalancingScan {
    int q = -1; ///< smallest q with theta(N = M * 2^q) >= target, -1 when cap reached
    std::vector<double> thetas;
    std::vector<Eigen::Index> Ns;
};

/// Linear scan q = 0, 1, ... up to q_cap.
BalancingScan balancing_scan(const WaveletSystem& sys, Eigen::Index M, double theta_target,
                             int q_cap, int quality);

/// G-adjusted restricted isometry constant in levels,
/// delta = sup over maximal supports of |P_Theta (A^T A - G^2) P_Theta|_2,
/// by exhaustive enumeration.  Throws resource_error beyond the support cap.
double gripl_bruteforce(const Eigen::MatrixXd& A, const GramRoot& G, const LevelScheme& scheme,
                        std::uint64_t support_cap = 1000000);

/// Randomized lower bound on the same quantity (max over sampled supports).
double gripl_probe(const Eigen::MatrixXd& A, const GramRoot& G, const LevelScheme& scheme,
                   int trials, std::uint64_t seed);

/// Weighted level norm |x|_{1,omega} for x on bandwidth K >= M_r.
double weighted_norm(const Eigen::VectorXd& x, const LevelScheme& scheme, const Weights& w);

/// Best (s,M)-term approximation error sigma_{s,M}(x)_{1,omega}: keep the
/// s_l largest per level (ties to the lower index), zero the tail block.
double best_sM_error(const Eigen::VectorXd& x, const LevelScheme& scheme, const Weights& w);

/// omega_l = s_l^{-1/2} with the tail weight set to
/// sqrt(r) (1/(3(1+r^{1/4})) + 2 sqrt(2/theta) |A P_K^M|_{1->2}).
Weights recommended_weights(const LevelScheme& scheme, const Eigen::MatrixXd& A,
                            const GramRoot& G, Eigen::Index K);

/// t_l = min(M_l - M_{l-1}, 2 ceil(4 kappa(G)^2 S_{omega,s} / omega_l^2)).
Eigen::VectorXi t_levels(const LevelScheme& scheme, const Weights& w, const GramRoot& G);

struct ErrorBounds {
    double l1w = 0;
    double l2 = 0;
};

/// Right-hand sides of the recovery error bounds, with
/// C = 2(2+sqrt(3))/(2-sqrt(3)) and D = 8 sqrt(2)/(2-sqrt(3)):
///   l1w: C sigma + D |G^-1| sqrt(S) eta
///   l2:  (1+(S/zeta)^{1/4}) (C sigma / sqrt(S) + D |G^-1| eta)
ErrorBounds error_bounds(double sigma_value, double eta_total, const LevelScheme& scheme,
                         const Weights& w, const GramRoot& G);

inline constexpr double kRecoveryC = 2.0 * (2.0 + 1.7320508075688772935) /
                                     (2.0 - 1.7320508075688772935);
inline constexpr double kRecoveryD = 8.0 * 1.4142135623730950488 /
                                     (2.0 - 1.7320508075688772935);

} // namespace cslab
