#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "cslab/grid_function.hpp"

namespace cslab {

/// Largest supported dyadic depth / Walsh bit width.  Keeps every digit sum
/// inside a 64-bit word.
inline constexpr int kMaxDyadicDepth = 62;

/// Hard cap on the scale of a dense sequency-ordered Hadamard matrix.
inline constexpr int kMaxHadamardScale = 13;

/// A dyadic rational x = t * 2^-p in [0,1), stored with an explicit depth so
/// the finite expansion is structural: 1/2 is (1,1), never 0.0111...
/// Digit x_j (j = 1..p, most significant first) is bit (p-j) of t.
struct DyadicPoint {
    std::uint64_t t = 0;
    int p = 0;

    DyadicPoint() = default;
    DyadicPoint(std::uint64_t numerator, int depth);

    double value() const { return static_cast<double>(t) * std::pow(0.5, p); }

    /// Same point expressed at depth q >= p.
    DyadicPoint at_depth(int q) const;

    /// x / 2^j as a dyadic point (depth grows by j).
    DyadicPoint scaled_down(int j) const { return DyadicPoint(t, p + j); }

    friend bool operator==(const DyadicPoint& a, const DyadicPoint& b);
};

/// Digitwise XOR of the two dyadic expansions at common depth max(p_x, p_y).
DyadicPoint dyadic_xor(const DyadicPoint& x, const DyadicPoint& y);

/// Walsh function w_n evaluated at a dyadic point; returns +1 or -1.
int walsh_eval(std::uint64_t n, const DyadicPoint& x);

/// Dense sequency-ordered Hadamard matrix of scale r: entry (i,j), 1-based,
/// equals w_{i-1}((j-1)/2^r).  Rows are mutually orthogonal with squared row
/// norm 2^r.
Eigen::MatrixXd sequency_hadamard(int r);

enum class FwhtNorm {
    Unnormalized, ///< V * c
    Analysis,     ///< 2^-r * V * c: entry n is <f, w_n> for f piecewise constant with values c
    Synthesis     ///< inverse of Analysis (equals Unnormalized; V is symmetric and V^2 = 2^r I)
};

/// Fast sequency-ordered Walsh-Hadamard transform, O(2^r * r).
/// Length must be a power of two.
Eigen::VectorXd fwht_sequency(const Eigen::VectorXd& c, FwhtNorm norm);

/// Partial sum sum_{n<N} y_n w_n evaluated on the depth-d grid.
/// Requires N <= 2^d (each w_n constant on depth-d cells).
GridFunction truncated_walsh_series(const Eigen::VectorXd& walsh_coeffs, int grid_depth);

} // namespace cslab
