#include "cslab/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>

#include "cslab/errors.hpp"
#include "cslab/parallel.hpp"

namespace cslab {

Eigen::MatrixXd CoherenceTable::ratios() const {
    const Eigen::Index r = mu.rows();
    if (r < 2) return Eigen::MatrixXd(0, 0);
    Eigen::MatrixXd out(r - 1, mu.cols());
    for (Eigen::Index k = 0; k + 1 < r; ++k)
        for (Eigen::Index l = 0; l < mu.cols(); ++l)
            out(k, l) = mu(k, l) / mu(k + 1, l);
    return out;
}

Weights Weights::unweighted(int r) {
    Weights w;
    w.omega = Eigen::VectorXd::Ones(r + 1);
    return w;
}

Weights Weights::inverse_sqrt(const Eigen::VectorXi& s, double tail) {
    Weights w;
    w.omega.resize(s.size() + 1);
    for (Eigen::Index l = 0; l < s.size(); ++l) {
        if (s(l) < 1) throw validation_error("Weights::inverse_sqrt: needs s_l >= 1");
        w.omega(l) = 1.0 / std::sqrt(double(s(l)));
    }
    if (tail <= 0) throw validation_error("Weights: weights must be positive");
    w.omega(s.size()) = tail;
    return w;
}

namespace {

void check_weights(const Weights& w, Eigen::Index r) {
    if (w.omega.size() != r + 1)
        throw validation_error("Weights: expected r+1 entries");
    if ((w.omega.array() <= 0).any())
        throw validation_error("Weights: weights must be positive");
}

} // namespace

double weighted_sparsity(const Weights& w, const Eigen::VectorXi& s) {
    check_weights(w, s.size());
    double acc = 0;
    for (Eigen::Index l = 0; l < s.size(); ++l) acc += w.omega(l) * w.omega(l) * s(l);
    return acc;
}

double weighted_sparsity_floor(const Weights& w, const Eigen::VectorXi& s) {
    check_weights(w, s.size());
    double acc = std::numeric_limits<double>::infinity();
    for (Eigen::Index l = 0; l < s.size(); ++l)
        acc = std::min(acc, w.omega(l) * w.omega(l) * s(l));
    return acc;
}

std::uint64_t SupportFamily::count() const {
    long double total = 1;
    for (Eigen::Index l = 0; l < s.size(); ++l) {
        const int width = M(l) - (l == 0 ? 0 : M(l - 1));
        long double c = 1;
        for (int i = 0; i < s(l); ++i) c = c * (width - i) / (i + 1);
        total *= std::max<long double>(c, 1);
        if (total > 1e18L) return UINT64_MAX;
    }
    return std::uint64_t(total + 0.5L);
}

void SupportFamily::for_each(const std::function<void(const std::vector<int>&)>& fn) const {
    const int r = int(s.size());
    // per-level lexicographic combination odometer
    std::vector<std::vector<int>> combos(static_cast<std::size_t>(r));
    for (int l = 0; l < r; ++l) {
        const int lo = (l == 0) ? 0 : M(l - 1);
        combos[std::size_t(l)].resize(std::size_t(s(l)));
        std::iota(combos[std::size_t(l)].begin(), combos[std::size_t(l)].end(), lo);
    }
    std::vector<int> support;
    const auto emit = [&] {
        support.clear();
        for (const auto& c : combos) support.insert(support.end(), c.begin(), c.end());
        fn(support);
    };
    const auto advance_level = [&](int l) -> bool {
        auto& c = combos[std::size_t(l)];
        const int lo = (l == 0) ? 0 : M(l - 1);
        const int hi = M(l); // exclusive
        const int sl = s(l);
        if (sl == 0) return false;
        for (int i = sl - 1; i >= 0; --i) {
            if (c[std::size_t(i)] + 1 <= hi - (sl - i)) {
                ++c[std::size_t(i)];
                for (int t = i + 1; t < sl; ++t) c[std::size_t(t)] = c[std::size_t(t - 1)] + 1;
                return true;
            }
        }
        for (int i = 0; i < sl; ++i) c[std::size_t(i)] = lo + i;
        return false;
    };
    while (true) {
        emit();
        int l = r - 1;
        while (l >= 0 && !advance_level(l)) --l;
        if (l < 0) break;
    }
}

CoherenceTable local_coherence(const SectionMatrix& sec, const LevelScheme& scheme) {
    const int r = scheme.levels();
    const int rs = int(scheme.M.size());
    if (sec.rows() < scheme.N(r - 1) || sec.cols() < scheme.M(rs - 1))
        throw validation_error("local_coherence: section bandwidths too small");
    CoherenceTable table;
    table.mu = Eigen::MatrixXd::Zero(r, rs);
    for (int k = 0; k < r; ++k) {
        const int lo = (k == 0) ? 0 : scheme.N(k - 1);
        for (int l = 0; l < rs; ++l) {
            const int cl = (l == 0) ? 0 : scheme.M(l - 1);
            table.mu(k, l) = sec.entries.block(lo, cl, scheme.N(k) - lo, scheme.M(l) - cl)
                                 .cwiseAbs2()
                                 .maxCoeff();
        }
    }
    return table;
}

CoherenceTable local_coherence_streamed(const WaveletSystem& sys, const LevelScheme& scheme,
                                        int quality) {
    const int r = scheme.levels();
    const int rs = int(scheme.M.size());
    const Eigen::Index rows = scheme.N(r - 1);
    if (rows > (Eigen::Index(1) << quality))
        throw resource_error("local_coherence_streamed: N_r exceeds 2^quality");

    CoherenceTable table;
    table.mu = Eigen::MatrixXd::Zero(r, rs);
    std::mutex merge;
    parallel_for(std::size_t(scheme.M(rs - 1)), [&](std::size_t j) {
        const BasisIndex idx = BasisIndex::from_position(sys.J0, Eigen::Index(j));
        const Eigen::VectorXd col = section_column(sys, idx, rows, quality);
        const int l = scheme.sparsity_level_of(Eigen::Index(j));
        Eigen::VectorXd mx = Eigen::VectorXd::Zero(r);
        for (int k = 0; k < r; ++k) {
            const int lo = (k == 0) ? 0 : scheme.N(k - 1);
            mx(k) = col.segment(lo, scheme.N(k) - lo).cwiseAbs2().maxCoeff();
        }
        std::lock_guard<std::mutex> guard(merge);
        for (int k = 0; k < r; ++k) table.mu(k, l) = std::max(table.mu(k, l), mx(k));
    });
    return table;
}

GramRoot balancing(const SectionMatrix& sec, Eigen::Index N, Eigen::Index M) {
    if (N < M) throw validation_error("balancing: needs N >= M");
    if (sec.rows() < N || sec.cols() < M)
        throw validation_error("balancing: section bandwidths too small");
    const auto B = sec.entries.topLeftCorner(N, M);
    const Eigen::MatrixXd gram = B.transpose() * B;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success) throw validation_error("balancing: eigensolver failed");

    GramRoot g;
    g.eigenvalues = es.eigenvalues();
    g.theta = g.eigenvalues(0);
    Eigen::VectorXd sqrt_vals = g.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    g.G = es.eigenvectors() * sqrt_vals.asDiagonal() * es.eigenvectors().transpose();
    g.g_inv_norm = g.theta > 1e-14 ? 1.0 / std::sqrt(g.theta)
                                   : std::numeric_limits<double>::infinity();
    return g;
}

BalancingScan balancing_scan(const WaveletSystem& sys, Eigen::Index M, double theta_target,
                             int q_cap, int quality) {
    if (theta_target <= 0 || theta_target >= 1)
        throw validation_error("balancing_scan: theta target must be in (0,1)");
    BalancingScan scan;
    for (int q = 0; q <= q_cap; ++q) {
        const Eigen::Index N = M << q;
        int qual = quality;
        while ((Eigen::Index(1) << qual) < N) ++qual;
        const SectionMatrix sec = assemble_section(sys, N, M, qual);
        const GramRoot g = balancing(sec, N, M);
        scan.Ns.push_back(N);
        scan.thetas.push_back(g.theta);
        if (g.theta >= theta_target) {
            scan.q = q;
            break;
        }
    }
    return scan;
}

namespace {

double restricted_spectral_norm(const Eigen::MatrixXd& Z, const std::vector<int>& support) {
    const Eigen::Index n = Eigen::Index(support.size());
    if (n == 0) return 0;
    Eigen::MatrixXd sub(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            sub(a, b) = Z(support[std::size_t(a)], support[std::size_t(b)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(n - 1)));
}

Eigen::MatrixXd gripl_difference(const Eigen::MatrixXd& A, const GramRoot& G,
                                 const LevelScheme& scheme) {
    const Eigen::Index M = scheme.M(scheme.M.size() - 1);
    if (A.cols() < M) throw validation_error("gripl: A has fewer columns than M_r");
    if (G.G.rows() < M) throw validation_error("gripl: G smaller than M_r");
    const auto AM = A.leftCols(M);
    return Eigen::MatrixXd(AM.transpose() * AM -
                           G.G.topLeftCorner(M, M) * G.G.topLeftCorner(M, M));
}

} // namespace

double gripl_bruteforce(const Eigen::MatrixXd& A, const GramRoot& G, const LevelScheme& scheme,
                        std::uint64_t support_cap) {
    SupportFamily fam{scheme.M, scheme.s};
    if (fam.count() > support_cap)
        throw resource_error("gripl_bruteforce: support enumeration exceeds cap; use gripl_probe");
    const Eigen::MatrixXd Z = gripl_difference(A, G, scheme);
    double delta = 0;
    fam.for_each([&](const std::vector<int>& support) {
        delta = std::max(delta, restricted_spectral_norm(Z, support));
    });
    return delta;
}

double gripl_probe(const Eigen::MatrixXd& A, const GramRoot& G, const LevelScheme& scheme,
                   int trials, std::uint64_t seed) {
    if (trials < 1) throw validation_error("gripl_probe: trials must be >= 1");
    const Eigen::MatrixXd Z = gripl_difference(A, G, scheme);
    std::mt19937_64 rng(seed);
    double delta = 0;
    std::vector<int> support;
    std::vector<int> pool;
    for (int t = 0; t < trials; ++t) {
        support.clear();
        for (Eigen::Index l = 0; l < scheme.s.size(); ++l) {
            const int lo = (l == 0) ? 0 : scheme.M(l - 1);
            const int width = scheme.M(l) - lo;
            pool.resize(std::size_t(width));
            std::iota(pool.begin(), pool.end(), lo);
            for (int i = 0; i < scheme.s(l); ++i) { // partial Fisher-Yates
                std::uniform_int_distribution<int> dist(i, width - 1);
                std::swap(pool[std::size_t(i)], pool[std::size_t(dist(rng))]);
                support.push_back(pool[std::size_t(i)]);
            }
        }
        delta = std::max(delta, restricted_spectral_norm(Z, support));
    }
    return delta;
}

double weighted_norm(const Eigen::VectorXd& x, const LevelScheme& scheme, const Weights& w) {
    const Eigen::Index r = scheme.M.size();
    check_weights(w, r);
    const Eigen::Index Mr = scheme.M(r - 1);
    if (x.size() < Mr) throw validation_error("weighted_norm: x shorter than M_r");
    double acc = 0;
    for (Eigen::Index l = 0; l < r; ++l) {
        const Eigen::Index lo = (l == 0) ? 0 : scheme.M(l - 1);
        acc += w.omega(l) * x.segment(lo, scheme.M(l) - lo).lpNorm<1>();
    }
    acc += w.omega(r) * x.tail(x.size() - Mr).lpNorm<1>();
    return acc;
}

double best_sM_error(const Eigen::VectorXd& x, const LevelScheme& scheme, const Weights& w) {
    const Eigen::Index r = scheme.M.size();
    check_weights(w, r);
    const Eigen::Index Mr = scheme.M(r - 1);
    if (x.size() < Mr) throw validation_error("best_sM_error: x shorter than M_r");
    double acc = 0;
    std::vector<Eigen::Index> order;
    for (Eigen::Index l = 0; l < r; ++l) {
        const Eigen::Index lo = (l == 0) ? 0 : scheme.M(l - 1);
        const Eigen::Index width = scheme.M(l) - lo;
        order.resize(std::size_t(width));
        std::iota(order.begin(), order.end(), lo);
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return std::abs(x(a)) > std::abs(x(b));
        });
        for (Eigen::Index i = scheme.s(l); i < width; ++i)
            acc += w.omega(l) * std::abs(x(order[std::size_t(i)]));
    }
    acc += w.omega(r) * x.tail(x.size() - Mr).lpNorm<1>();
    return acc;
}

Weights recommended_weights(const LevelScheme& scheme, const Eigen::MatrixXd& A,
                            const GramRoot& G, Eigen::Index K) {
    if (!G.balanced()) throw validation_error("recommended_weights: balancing property fails");
    const Eigen::Index r = scheme.M.size();
    const Eigen::Index Mr = scheme.M(r - 1);
    if (K < Mr || A.cols() < K)
        throw validation_error("recommended_weights: need M_r <= K <= cols(A)");
    double tail12 = 0; // |A P_K^M|_{1->2}: max column 2-norm over columns M+1..K
    for (Eigen::Index j = Mr; j < K; ++j) tail12 = std::max(tail12, A.col(j).norm());
    const double rr = double(r);
    const double tail = std::sqrt(rr) * (1.0 / (3.0 * (1.0 + std::pow(rr, 0.25))) +
                                         2.0 * std::sqrt(2.0 / G.theta) * tail12);
    return Weights::inverse_sqrt(scheme.s, tail);
}

Eigen::VectorXi t_levels(const LevelScheme& scheme, const Weights& w, const GramRoot& G) {
    const Eigen::Index r = scheme.M.size();
    check_weights(w, r);
    const double S = weighted_sparsity(w, scheme.s);
    const double kappa2 = G.condition() * G.condition();
    Eigen::VectorXi t(r);
    for (Eigen::Index l = 0; l < r; ++l) {
        // nudge below integer boundaries: 4 kappa^2 S / omega^2 is often an
        // exact integer that float rounding pushes a few ulps high
        const double v = 4.0 * kappa2 * S / (w.omega(l) * w.omega(l));
        const double raw = 2.0 * std::ceil(v - 1e-9 * std::max(1.0, v));
        t(int(l)) = int(std::min<double>(scheme.sparsity_width(int(l)), raw));
    }
    return t;
}

ErrorBounds error_bounds(double sigma_value, double eta_total, const LevelScheme& scheme,
                         const Weights& w, const GramRoot& G) {
    const double S = weighted_sparsity(w, scheme.s);
    const double zeta = weighted_sparsity_floor(w, scheme.s);
    ErrorBounds b;
    b.l1w = kRecoveryC * sigma_value + kRecoveryD * G.g_inv_norm * std::sqrt(S) * eta_total;
    b.l2 = (1.0 + std::pow(S / zeta, 0.25)) *
           (kRecoveryC * sigma_value / std::sqrt(S) + kRecoveryD * G.g_inv_norm * eta_total);
    return b;
}

} // namespace cslab
