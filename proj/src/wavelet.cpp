#include "cslab/wavelet.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cslab/errors.hpp"

namespace cslab {

namespace {

double regularity_exponent(int nu) {
    switch (nu) {
        case 1: return 0.0; // Haar: not uniformly Lipschitz
        case 2: return 0.55;
        case 3: return 1.08;
        case 4: return 1.61;
        default: return 0.2 * nu; // asymptotic heuristic, not a guarantee
    }
}

// Eigenvector of `T` at eigenvalue 1, entries normalized to sum 1.  Fails if
// the eigenvalue 1 is missing or not simple (defective filter).
Eigen::VectorXd unit_eigenvector(const Eigen::MatrixXd& T, const char* what) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(T);
    if (es.info() != Eigen::Success) throw validation_error(std::string(what) + ": eigensolver failed");
    const auto& vals = es.eigenvalues();
    Eigen::Index best = -1;
    double best_dist = 1e300, second = 1e300;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        const double d = std::abs(vals(i) - std::complex<double>(1.0, 0.0));
        if (d < best_dist) {
            second = best_dist;
            best_dist = d;
            best = i;
        } else if (d < second) {
            second = d;
        }
    }
    if (best < 0 || best_dist > 1e-8)
        throw validation_error(std::string(what) + ": invalid filter, no eigenvalue 1");
    if (T.rows() > 1 && second < 1e-6)
        throw validation_error(std::string(what) + ": invalid filter, eigenvalue 1 not simple");
    Eigen::VectorXd v = es.eigenvectors().col(best).real();
    const double s = v.sum();
    if (std::abs(s) < 1e-12)
        throw validation_error(std::string(what) + ": invalid filter, degenerate eigenvector");
    return v / s;
}

// phi_std lives on [0, 2nu-1]; the paper's phi is phi_std(. + nu - 1).
Eigen::Index support_cells(int nu, int q) { return Eigen::Index(2 * nu - 1) << q; }

} // namespace

WaveletSystem WaveletSystem::create(int nu, int J0, WaveletFamily family) {
    if (nu < 1) throw validation_error("WaveletSystem: nu must be >= 1");
    if (nu == 1 && J0 < 0) throw validation_error("WaveletSystem: J0 must be >= 0");
    if (nu >= 2 && (Eigen::Index(1) << std::max(J0, 0)) < 2 * nu)
        throw validation_error("WaveletSystem: need 2^J0 >= 2*nu for nu >= 2");

    WaveletSystem sys;
    sys.nu = nu;
    sys.J0 = J0;
    sys.family = family;
    sys.lowpass = filter_taps(nu, family);
    sys.alpha = regularity_exponent(nu);

    const double sum_err = std::abs(sys.lowpass.sum() - std::sqrt(2.0));
    if (sum_err > 1e-12) throw validation_error("WaveletSystem: taps do not sum to sqrt(2)");
    for (int m = 1; m < nu; ++m) {
        double dot = 0;
        for (int k = 0; k + 2 * m < 2 * nu; ++k) dot += sys.lowpass(k) * sys.lowpass(k + 2 * m);
        if (std::abs(dot) > 1e-10) throw validation_error("WaveletSystem: taps not orthonormal");
    }
    if (std::abs(sys.lowpass.squaredNorm() - 1.0) > 1e-10)
        throw validation_error("WaveletSystem: taps not unit norm");
    return sys;
}

Eigen::VectorXd WaveletSystem::highpass() const {
    const Eigen::Index n = lowpass.size();
    Eigen::VectorXd g(n);
    for (Eigen::Index k = 0; k < n; ++k) g(k) = (k % 2 == 0 ? 1.0 : -1.0) * lowpass(n - 1 - k);
    return g;
}

BasisIndex BasisIndex::from_position(int J0, Eigen::Index position) {
    if (position < 0) throw validation_error("BasisIndex: negative position");
    const Eigen::Index scaling_count = Eigen::Index(1) << J0;
    if (position < scaling_count) return {J0, int(position), 0};
    int j = J0;
    while ((Eigen::Index(1) << (j + 1)) <= position) ++j;
    return {j, int(position - (Eigen::Index(1) << j)), 1};
}

Eigen::Index BasisIndex::position(int J0) const {
    if (j < J0 || k < 0 || k >= (1 << j))
        throw validation_error("BasisIndex: out of range for basis");
    if (s == 0) {
        if (j != J0) throw validation_error("BasisIndex: scaling functions exist only at J0");
        return k;
    }
    return (Eigen::Index(1) << j) + k;
}

GridFunction cascade_refine(const WaveletSystem& sys, int s, int extra_depth) {
    if (s != 0 && s != 1) throw validation_error("cascade_refine: s must be 0 or 1");
    if (extra_depth < 0) throw validation_error("cascade_refine: negative depth");
    const int nu = sys.nu;

    if (sys.is_haar()) {
        // exact: phi = indicator of [0,1); psi = +1 on [0,1/2), -1 on [1/2,1)
        const Eigen::Index n = Eigen::Index(1) << extra_depth;
        Eigen::VectorXd v(n);
        if (s == 0) {
            v.setOnes();
        } else {
            v.head(n / 2).setConstant(1.0);
            v.tail(n - n / 2).setConstant(-1.0);
            if (n == 1) v(0) = 1.0; // depth 0: left endpoint
        }
        return GridFunction(extra_depth, std::move(v));
    }

    const Eigen::VectorXd& h = sys.lowpass;
    const int interior = 2 * nu - 2; // integer points 1..2nu-2; endpoints vanish
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(interior, interior);
    const double rt2 = std::sqrt(2.0);
    for (int i = 1; i <= interior; ++i)
        for (int m = 1; m <= interior; ++m) {
            const int idx = 2 * i - m;
            if (idx >= 0 && idx < 2 * nu) T(i - 1, m - 1) = rt2 * h(idx);
        }
    const Eigen::VectorXd integer_vals = unit_eigenvector(T, "cascade_refine");

    // values of phi_std on grids of spacing 2^-q, refined level by level:
    // phi(i/2^{q+1}) = sqrt(2) sum_k h_k phi((i - k 2^q)/2^q)
    Eigen::VectorXd cur = Eigen::VectorXd::Zero(support_cells(nu, 0) + 1);
    for (int i = 1; i <= interior; ++i) cur(i) = integer_vals(i - 1);
    for (int q = 0; q < extra_depth + (s == 1 ? -1 : 0); ++q) {
        const Eigen::Index n_next = support_cells(nu, q + 1) + 1;
        Eigen::VectorXd next = Eigen::VectorXd::Zero(n_next);
        const Eigen::Index stride = Eigen::Index(1) << q;
        for (Eigen::Index i = 0; i < n_next; ++i) {
            double acc = 0;
            for (int k = 0; k < 2 * nu; ++k) {
                const Eigen::Index src = i - k * stride;
                if (src >= 0 && src < cur.size()) acc += h(k) * cur(src);
            }
            next(i) = rt2 * acc;
        }
        cur = std::move(next);
    }

    if (s == 1) {
        // psi(i 2^-q) = sqrt(2) sum_k g_k phi(i 2^-(q-1) - k); cur holds phi on
        // the depth-(q-1) grid (depth 0 when q = 0, where the argument 2i - k
        // is itself an integer grid point).
        const Eigen::VectorXd g = sys.highpass();
        const int q = extra_depth;
        Eigen::VectorXd out = Eigen::VectorXd::Zero(support_cells(nu, q));
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            double acc = 0;
            for (int k = 0; k < 2 * nu; ++k) {
                const Eigen::Index src = (q >= 1) ? i - k * (Eigen::Index(1) << (q - 1))
                                                  : 2 * i - k;
                if (src >= 0 && src < cur.size()) acc += g(k) * cur(src);
            }
            out(i) = rt2 * acc;
        }
        return GridFunction(extra_depth, std::move(out));
    }

    return GridFunction(extra_depth, cur.head(support_cells(nu, extra_depth)));
}

Eigen::VectorXd support_cell_averages(const WaveletSystem& sys, int s, int q) {
    if (s != 0 && s != 1) throw validation_error("support_cell_averages: s must be 0 or 1");
    if (q < 0) throw validation_error("support_cell_averages: negative depth");
    const int nu = sys.nu;

    if (sys.is_haar()) {
        const Eigen::Index n = Eigen::Index(1) << q;
        Eigen::VectorXd v(n);
        if (s == 0) {
            v.setOnes();
        } else if (n == 1) {
            v(0) = 0.0; // psi integrates to zero over its support
        } else {
            v.head(n / 2).setConstant(1.0);
            v.tail(n / 2).setConstant(-1.0);
        }
        return v;
    }

    const Eigen::VectorXd& h = sys.lowpass;
    const double rt2 = std::sqrt(2.0);
    const int cells0 = 2 * nu - 1;

    // integer-cell averages a_0 solve a_0 = T a_0 with
    // T[i][m] = (sqrt(2)/2) (h_{2i-m} + h_{2i+1-m}); normalization: integral 1
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(cells0, cells0);
    for (int i = 0; i < cells0; ++i)
        for (int m = 0; m < cells0; ++m) {
            double acc = 0;
            if (2 * i - m >= 0 && 2 * i - m < 2 * nu) acc += h(2 * i - m);
            if (2 * i + 1 - m >= 0 && 2 * i + 1 - m < 2 * nu) acc += h(2 * i + 1 - m);
            T(i, m) = 0.5 * rt2 * acc;
        }
    Eigen::VectorXd avg = unit_eigenvector(T, "support_cell_averages");

    // a_{p+1}[i] = sqrt(2) sum_k h_k a_p[i - k 2^p]; exact on averages
    const int target = (s == 1) ? q - 1 : q;
    for (int p = 0; p < std::max(target, 0); ++p) {
        const Eigen::Index n_next = support_cells(nu, p + 1);
        Eigen::VectorXd next = Eigen::VectorXd::Zero(n_next);
        const Eigen::Index stride = Eigen::Index(1) << p;
        for (Eigen::Index i = 0; i < n_next; ++i) {
            double acc = 0;
            for (int k = 0; k < 2 * nu; ++k) {
                const Eigen::Index src = i - k * stride;
                if (src >= 0 && src < avg.size()) acc += h(k) * avg(src);
            }
            next(i) = rt2 * acc;
        }
        avg = std::move(next);
    }

    if (s == 0) return avg;

    // b_q[i] = sqrt(2) sum_k g_k a_{q-1}[i - k 2^{q-1}]
    const Eigen::VectorXd g = sys.highpass();
    if (q == 0) {
        // averages at depth 1 first, then combine cell pairs
        Eigen::VectorXd b1 = Eigen::VectorXd::Zero(support_cells(nu, 1));
        for (Eigen::Index i = 0; i < b1.size(); ++i) {
            double acc = 0;
            for (int k = 0; k < 2 * nu; ++k) {
                const Eigen::Index src = i - k;
                if (src >= 0 && src < avg.size()) acc += g(k) * avg(src);
            }
            b1(i) = rt2 * acc;
        }
        Eigen::VectorXd b0(cells0);
        for (int i = 0; i < cells0; ++i) b0(i) = 0.5 * (b1(2 * i) + b1(2 * i + 1));
        return b0;
    }
    const Eigen::Index stride = Eigen::Index(1) << (q - 1);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(support_cells(nu, q));
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        double acc = 0;
        for (int k = 0; k < 2 * nu; ++k) {
            const Eigen::Index src = i - k * stride;
            if (src >= 0 && src < avg.size()) acc += g(k) * avg(src);
        }
        out(i) = rt2 * acc;
    }
    return out;
}

GridFunction periodized_cell_averages(const WaveletSystem& sys, const BasisIndex& idx,
                                      int depth) {
    if (idx.j < (sys.is_haar() ? 0 : sys.J0))
        throw validation_error("periodized_cell_averages: scale below coarsest");
    if (idx.s != 0 && idx.s != 1) throw validation_error("periodized_cell_averages: bad s");
    if (idx.k < 0 || idx.k >= (1 << idx.j))
        throw validation_error("periodized_cell_averages: translation out of Lambda_j");
    if (depth < idx.j)
        throw validation_error("periodized_cell_averages: depth smaller than scale");
    if (sys.nu >= 2 && (Eigen::Index(1) << idx.j) < 2 * sys.nu)
        throw validation_error("periodized_cell_averages: support does not fit in one period");

    const int q = depth - idx.j;
    const Eigen::VectorXd avg = support_cell_averages(sys, idx.s, q);
    const Eigen::Index cells = Eigen::Index(1) << depth;
    check_dense_alloc(std::size_t(cells) * sizeof(double), "periodized_cell_averages");

    // phi^s_{j,k}(x) = 2^{j/2} phi_std(2^j x - (k - nu + 1)); placement wraps
    // mod 1, which is exactly the periodic extension for boundary k.
    const double scale = std::pow(2.0, 0.5 * idx.j);
    const Eigen::Index offset = Eigen::Index(idx.k - sys.nu + 1) << q;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(cells);
    for (Eigen::Index c = 0; c < avg.size(); ++c) {
        const Eigen::Index pos = ((offset + c) % cells + cells) % cells;
        out(pos) += scale * avg(c);
    }
    return GridFunction(depth, std::move(out));
}

Eigen::VectorXd dwt_periodic_analysis(const WaveletSystem& sys, const Eigen::VectorXd& c,
                                      int J0) {
    Eigen::Index n = c.size();
    if (n <= 0 || (n & (n - 1)) != 0)
        throw validation_error("dwt_periodic_analysis: length is not a power of two");
    int p = 0;
    while ((Eigen::Index(1) << p) < n) ++p;
    if (J0 < 0 || J0 > p) throw validation_error("dwt_periodic_analysis: bad J0");

    const Eigen::VectorXd& h = sys.lowpass;
    const Eigen::VectorXd g = sys.highpass();
    Eigen::VectorXd out(n);
    Eigen::VectorXd approx = c;
    for (int j = p; j > J0; --j) {
        const Eigen::Index len = Eigen::Index(1) << j;
        const Eigen::Index half = len / 2;
        Eigen::VectorXd a(half), d(half);
        for (Eigen::Index k = 0; k < half; ++k) {
            double sa = 0, sd = 0;
            for (Eigen::Index t = 0; t < h.size(); ++t) {
                const double v = approx((2 * k + t) % len);
                sa += h(t) * v;
                sd += g(t) * v;
            }
            a(k) = sa;
            d(k) = sd;
        }
        out.segment(half, half) = d;
        approx = a;
    }
    out.head(Eigen::Index(1) << J0) = approx;
    return out;
}

Eigen::VectorXd dwt_periodic_synthesis(const WaveletSystem& sys, const Eigen::VectorXd& coeffs,
                                       int J0) {
    Eigen::Index n = coeffs.size();
    if (n <= 0 || (n & (n - 1)) != 0)
        throw validation_error("dwt_periodic_synthesis: length is not a power of two");
    int p = 0;
    while ((Eigen::Index(1) << p) < n) ++p;
    if (J0 < 0 || J0 > p) throw validation_error("dwt_periodic_synthesis: bad J0");

    const Eigen::VectorXd& h = sys.lowpass;
    const Eigen::VectorXd g = sys.highpass();
    Eigen::VectorXd approx = coeffs.head(Eigen::Index(1) << J0);
    for (int j = J0; j < p; ++j) {
        const Eigen::Index half = Eigen::Index(1) << j;
        const Eigen::Index len = 2 * half;
        const auto detail = coeffs.segment(half, half);
        Eigen::VectorXd up = Eigen::VectorXd::Zero(len);
        for (Eigen::Index k = 0; k < half; ++k)
            for (Eigen::Index t = 0; t < h.size(); ++t) {
                const Eigen::Index m = (2 * k + t) % len;
                up(m) += h(t) * approx(k) + g(t) * detail(k);
            }
        approx = up;
    }
    return approx;
}

} // namespace cslab
