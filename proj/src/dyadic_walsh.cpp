#include "cslab/dyadic_walsh.hpp"

#include <bit>

#include "cslab/errors.hpp"

namespace cslab {

DyadicPoint::DyadicPoint(std::uint64_t numerator, int depth) : t(numerator), p(depth) {
    if (depth < 0 || depth > kMaxDyadicDepth)
        throw validation_error("DyadicPoint: depth out of [0, 62]");
    if (depth < 64 && numerator >> depth)
        throw validation_error("DyadicPoint: numerator not below 2^depth");
}

DyadicPoint DyadicPoint::at_depth(int q) const {
    if (q < p) throw validation_error("DyadicPoint::at_depth: shallower than stored depth");
    return DyadicPoint(t << (q - p), q);
}

bool operator==(const DyadicPoint& a, const DyadicPoint& b) {
    const int q = std::max(a.p, b.p);
    return a.at_depth(q).t == b.at_depth(q).t;
}

DyadicPoint dyadic_xor(const DyadicPoint& x, const DyadicPoint& y) {
    const int q = std::max(x.p, y.p);
    return DyadicPoint(x.at_depth(q).t ^ y.at_depth(q).t, q);
}

namespace {

std::uint64_t reverse_low_bits(std::uint64_t v, int width) {
    std::uint64_t out = 0;
    for (int i = 0; i < width; ++i) {
        out = (out << 1) | (v & 1u);
        v >>= 1;
    }
    return out;
}

} // namespace

int walsh_eval(std::uint64_t n, const DyadicPoint& x) {
    // w_n(x) = (-1)^(sum_j (n_j + n_{j+1}) x_j); the exponent digits are the
    // Gray code n ^ (n >> 1) paired against the dyadic digits of x.
    const std::uint64_t gray = n ^ (n >> 1);
    const std::uint64_t digits = reverse_low_bits(x.t, x.p);
    return (std::popcount(gray & digits) & 1u) ? -1 : 1;
}

Eigen::MatrixXd sequency_hadamard(int r) {
    if (r < 0 || r > kMaxHadamardScale)
        throw resource_error("sequency_hadamard: scale out of [0, 13]");
    const Eigen::Index n = Eigen::Index(1) << r;
    check_dense_alloc(std::size_t(n) * std::size_t(n) * sizeof(double), "sequency_hadamard");
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = walsh_eval(std::uint64_t(i), DyadicPoint(std::uint64_t(j), r));
    return m;
}

Eigen::VectorXd fwht_sequency(const Eigen::VectorXd& c, FwhtNorm norm) {
    const Eigen::Index n = c.size();
    if (n <= 0 || (n & (n - 1)) != 0)
        throw validation_error("fwht_sequency: length is not a power of two");
    int r = 0;
    while ((Eigen::Index(1) << r) < n) ++r;

    // Sequency output = natural-ordered butterflies + bit-reversal on the
    // input and Gray-code reordering on the output:
    //   (V c)[n] = (H d)[gray(n)],  d[u] = c[rev_r(u)],  H = Hadamard order.
    Eigen::VectorXd work(n);
    for (Eigen::Index u = 0; u < n; ++u)
        work(u) = c(Eigen::Index(reverse_low_bits(std::uint64_t(u), r)));

    for (Eigen::Index h = 1; h < n; h <<= 1) {
        for (Eigen::Index base = 0; base < n; base += 2 * h) {
            for (Eigen::Index i = base; i < base + h; ++i) {
                const double a = work(i);
                const double b = work(i + h);
                work(i) = a + b;
                work(i + h) = a - b;
            }
        }
    }

    Eigen::VectorXd out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const std::uint64_t g = std::uint64_t(k) ^ (std::uint64_t(k) >> 1);
        out(k) = work(Eigen::Index(g));
    }
    if (norm == FwhtNorm::Analysis) out *= std::pow(0.5, r);
    return out;
}

GridFunction truncated_walsh_series(const Eigen::VectorXd& walsh_coeffs, int grid_depth) {
    if (grid_depth < 0 || grid_depth > kMaxDyadicDepth)
        throw validation_error("truncated_walsh_series: bad grid depth");
    const Eigen::Index cells = Eigen::Index(1) << grid_depth;
    if (walsh_coeffs.size() > cells)
        throw validation_error("truncated_walsh_series: more coefficients than grid cells");
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(cells);
    padded.head(walsh_coeffs.size()) = walsh_coeffs;
    return GridFunction(grid_depth, fwht_sequency(padded, FwhtNorm::Synthesis));
}

} // namespace cslab
