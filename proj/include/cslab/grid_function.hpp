#pragma once

#include <Eigen/Dense>

namespace cslab {

/// Piecewise-constant function on [0,1): value `values[i]` on the dyadic cell
/// [i*2^-depth, (i+1)*2^-depth).
struct GridFunction {
    int depth = 0;
    Eigen::VectorXd values;

    GridFunction() = default;
    GridFunction(int d, Eigen::VectorXd v) : depth(d), values(std::move(v)) {}

    Eigen::Index size() const { return values.size(); }

    /// L2 norm of the representative.
    double l2_norm() const { return values.norm() * std::pow(0.5, 0.5 * depth); }
};

/// L2 distance between two grid functions, prolonging the coarser one.
double grid_l2_distance(const GridFunction& a, const GridFunction& b);

/// Prolong to a finer dyadic grid (values repeated on subcells).
GridFunction prolong(const GridFunction& f, int depth);

} // namespace cslab
