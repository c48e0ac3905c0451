#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cslab/dyadic_walsh.hpp"
#include "cslab/wavelet.hpp"

namespace cslab {

/// Dense finite section P_N U P_M of the change-of-basis isometry
/// U = [B_wh, B_wave]: entry (n+1, j), 1-based, approximates <b^sp_j, w_n>
/// within entry_err.  Exact (to rounding) for Haar, and in fact for every
/// system here: the cell averages feeding the transform are exact, so
/// entries for n < 2^quality carry no discretization error beyond floating
/// point.
struct SectionMatrix {
    Eigen::MatrixXd entries; ///< N x M
    WaveletSystem sys;
    double entry_err = 0;
    std::vector<BasisIndex> col_index_map;

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }
};

/// Single entry U_{n+1, idx} = <phi^s_{j,k}, w_n>, computed as the analysis
/// transform coefficient of the periodized cell averages at the given
/// quality depth.  Refuses n >= 2^quality: the Walsh function is not
/// constant on grid cells there, and aliased entries would corrupt
/// coherence tables invisibly.
double u_entry(const WaveletSystem& sys, std::uint64_t n, const BasisIndex& idx, int quality);

/// All entries U_{n+1, idx} for n < rows in one transform.
Eigen::VectorXd section_column(const WaveletSystem& sys, const BasisIndex& idx,
                               Eigen::Index rows, int quality);

/// Dense section with per-column generation; deterministic for fixed inputs.
/// Requires rows <= 2^quality.
SectionMatrix assemble_section(const WaveletSystem& sys, Eigen::Index rows,
                               Eigen::Index cols, int quality);

Eigen::VectorXd apply_section(const SectionMatrix& sec, const Eigen::VectorXd& v);
Eigen::VectorXd apply_section_adjoint(const SectionMatrix& sec, const Eigen::VectorXd& v);

/// CSV dump (one row per matrix row, locale-independent decimals).
void dump_section_csv(const SectionMatrix& sec, const std::string& path);

} // namespace cslab
