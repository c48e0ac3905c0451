#pragma once

#include <Eigen/Dense>

#include "cslab/grid_function.hpp"

namespace cslab {

enum class WaveletFamily { MinimumPhase, Symlet };

/// Lowpass filter taps h_0..h_{2nu-1} for the family, normalized so that
/// sum h = sqrt(2).  Supported: minimum-phase nu = 1..10, symlet nu = 2..10.
Eigen::VectorXd filter_taps(int nu, WaveletFamily family);

/// Orthonormal Daubechies-type wavelet system on [0,1) with periodic
/// boundary extension.  The scaling function and wavelet have minimal
/// support [-nu+1, nu]; the basis starts at coarsest scale J0.
struct WaveletSystem {
    int nu = 1;
    int J0 = 0;
    WaveletFamily family = WaveletFamily::MinimumPhase;
    Eigen::VectorXd lowpass; ///< h_0..h_{2nu-1}
    double alpha = 0;        ///< Lipschitz regularity exponent (0.55/1.08/1.61 for nu=2/3/4)

    static WaveletSystem create(int nu, int J0,
                                WaveletFamily family = WaveletFamily::MinimumPhase);

    /// Highpass taps g_k = (-1)^k h_{2nu-1-k}.
    Eigen::VectorXd highpass() const;

    bool is_haar() const { return nu == 1; }

    /// nu = 2 is fully supported computationally but carries no recovery
    /// guarantee; reports must flag it.
    bool has_recovery_guarantee() const { return nu != 2; }
};

/// Index into B_wave: scaling functions (s=0) at scale J0 come first, then
/// wavelets (s=1) at scales J0, J0+1, ...  Translations k run over
/// Lambda_j = {0..2^j-1}; k < nu and k >= 2^j-nu are the boundary sets that
/// get periodized.
struct BasisIndex {
    int j = 0; ///< scale
    int k = 0; ///< translation in {0..2^j-1}
    int s = 0; ///< 0 scaling, 1 wavelet

    /// Decode a 0-based linear position: [0, 2^J0) scaling at J0; for
    /// p >= 2^J0, scale j = floor(log2 p) with k = p - 2^j, s = 1.
    static BasisIndex from_position(int J0, Eigen::Index position);

    /// Inverse of from_position; requires s=1 or j=J0.
    Eigen::Index position(int J0) const;

    bool is_boundary(int nu) const { return k < nu || k >= (1 << j) - nu; }
};

/// Point values of phi (s=0) or psi (s=1) on the dyadic grid of spacing
/// 2^-extra_depth over the support [-nu+1, nu]; (2nu-1)*2^extra_depth values,
/// left endpoints.  Integer-point values come from the eigenvector of the
/// two-scale transfer matrix at eigenvalue 1 (sum over integers = 1); the
/// grid is then filled by cascade refinement.  Haar is exact.
GridFunction cascade_refine(const WaveletSystem& sys, int s, int extra_depth);

/// Exact averages of phi/psi over the cells of spacing 2^-q on the support,
/// computed by the two-scale refinement of cell averages (integer-cell
/// averages are an eigenvector; the refinement relation is exact on
/// averages, so no oversampling is needed).
Eigen::VectorXd support_cell_averages(const WaveletSystem& sys, int s, int q);

/// The 2^depth cell averages over [0,1) of the basis function phi^s_{j,k},
/// periodized when the support crosses the seam.  L2 norm of the
/// representative approaches 1 as depth grows.
GridFunction periodized_cell_averages(const WaveletSystem& sys, const BasisIndex& idx,
                                      int depth);

/// One- or multi-level orthonormal discrete wavelet transform with periodic
/// convolution: analysis of a length-2^p vector down to scale J0, laid out
/// as [approx_J0, detail_J0, ..., detail_{p-1}].  This is the classic
/// finite-dimensional model (and deliberately commits the wavelet crime when
/// its input is point samples).
Eigen::VectorXd dwt_periodic_analysis(const WaveletSystem& sys, const Eigen::VectorXd& c,
                                      int J0);
Eigen::VectorXd dwt_periodic_synthesis(const WaveletSystem& sys, const Eigen::VectorXd& coeffs,
                                       int J0);

} // namespace cslab
