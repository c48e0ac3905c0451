#include "cslab/sampling.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "cslab/errors.hpp"
#include "cslab/io.hpp"

namespace cslab {

int LevelScheme::sampling_level_of(Eigen::Index n) const {
    for (int k = 0; k < levels(); ++k)
        if (n < N(k)) return k;
    throw validation_error("sampling_level_of: row beyond N_r");
}

int LevelScheme::sparsity_level_of(Eigen::Index j) const {
    for (int l = 0; l < int(M.size()); ++l)
        if (j < M(l)) return l;
    throw validation_error("sparsity_level_of: column beyond M_r");
}

void LevelScheme::validate(bool require_m) const {
    const int r = levels();
    if (r < 1) throw validation_error("LevelScheme: no sampling levels");
    if (M.size() < 1) throw validation_error("LevelScheme: no sparsity levels");
    if (s.size() != M.size()) throw validation_error("LevelScheme: |s| != |M|");
    for (int k = 0; k < r; ++k) {
        if (N(k) < 1 || (k > 0 && N(k) <= N(k - 1)))
            throw validation_error("LevelScheme: N must be strictly increasing and positive");
    }
    for (int l = 0; l < int(M.size()); ++l) {
        if (M(l) < 1 || (l > 0 && M(l) <= M(l - 1)))
            throw validation_error("LevelScheme: M must be strictly increasing and positive");
        if (s(l) < 0 || s(l) > sparsity_width(l))
            throw validation_error("LevelScheme: s_l must lie in [0, M_l - M_{l-1}]");
    }
    if (r0 < 0 || r0 > r) throw validation_error("LevelScheme: r0 out of [0, r]");
    if (require_m) {
        if (m.size() != r) throw validation_error("LevelScheme: |m| != |N|");
        for (int k = 0; k < r; ++k) {
            if (m(k) < (k < r0 ? sampling_width(k) : 1) || m(k) > sampling_width(k))
                throw validation_error(
                    "LevelScheme: m_k out of range (saturated levels need full width)");
        }
    }
}

Eigen::Index SamplingPattern::total_rows() const {
    Eigen::Index n = 0;
    for (const auto& lv : rows) n += Eigen::Index(lv.size());
    return n;
}

std::vector<std::pair<int, double>> SamplingPattern::scaled_rows() const {
    std::vector<std::pair<int, double>> out;
    out.reserve(std::size_t(total_rows()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double scale = 1.0 / std::sqrt(p(Eigen::Index(k)));
        for (int n : rows[k]) out.emplace_back(n, scale);
    }
    return out;
}

SamplingPattern draw_pattern(const LevelScheme& scheme, std::uint64_t seed) {
    scheme.validate(true);
    SamplingPattern pat;
    pat.seed = seed;
    pat.p.resize(scheme.levels());
    pat.rows.resize(std::size_t(scheme.levels()));
    std::mt19937_64 rng(seed);
    for (int k = 0; k < scheme.levels(); ++k) {
        const int lo = (k == 0) ? 0 : scheme.N(k - 1);
        const int width = scheme.sampling_width(k);
        const int mk = scheme.m(k);
        pat.p(k) = double(mk) / double(width);
        auto& lv = pat.rows[std::size_t(k)];
        lv.reserve(std::size_t(mk));
        if (k < scheme.r0 || mk == width) {
            for (int n = lo; n < lo + width; ++n) lv.push_back(n);
        } else {
            std::uniform_int_distribution<int> dist(lo, lo + width - 1);
            for (int i = 0; i < mk; ++i) lv.push_back(dist(rng));
        }
    }
    return pat;
}

void write_pattern_csv(const SamplingPattern& pattern, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < pattern.rows.size(); ++k)
        for (int n : pattern.rows[k])
            rows.push_back({std::to_string(k + 1), std::to_string(n + 1)});
    write_csv_cells(path, {"level", "row_index"}, rows);
}

Eigen::MatrixXd MeasurementOperator::dense_matrix() const {
    const auto sr = pattern.scaled_rows();
    Eigen::MatrixXd A(Eigen::Index(sr.size()), K);
    for (std::size_t i = 0; i < sr.size(); ++i)
        A.row(Eigen::Index(i)) = sr[i].second * section.entries.row(sr[i].first).head(K);
    return A;
}

Eigen::VectorXd MeasurementOperator::apply(const Eigen::VectorXd& z) const {
    if (z.size() != K) throw validation_error("MeasurementOperator::apply: dimension mismatch");
    const auto sr = pattern.scaled_rows();
    Eigen::VectorXd out(Eigen::Index(sr.size()));
    for (std::size_t i = 0; i < sr.size(); ++i)
        out(Eigen::Index(i)) = sr[i].second * section.entries.row(sr[i].first).head(K).dot(z);
    return out;
}

Eigen::VectorXd MeasurementOperator::apply_adjoint(const Eigen::VectorXd& w) const {
    const auto sr = pattern.scaled_rows();
    if (w.size() != Eigen::Index(sr.size()))
        throw validation_error("MeasurementOperator::apply_adjoint: dimension mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(K);
    for (std::size_t i = 0; i < sr.size(); ++i)
        out += w(Eigen::Index(i)) * sr[i].second *
               section.entries.row(sr[i].first).head(K).transpose();
    return out;
}

MeasurementOperator make_operator(const LevelScheme& scheme, const SamplingPattern& pattern,
                                  SectionMatrix section, Eigen::Index K) {
    if (section.rows() < scheme.N(scheme.levels() - 1))
        throw validation_error("make_operator: section has fewer rows than N_r");
    if (K < 1 || K > section.cols())
        throw validation_error("make_operator: K outside section columns");
    MeasurementOperator op;
    op.pattern = pattern;
    op.section = std::move(section);
    op.K = K;
    return op;
}

MeasureResult measure(const MeasurementOperator& op, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& e1) {
    if (x.size() > op.section.cols())
        throw validation_error("measure: signal extends beyond the simulated bandwidth");
    const auto sr = op.pattern.scaled_rows();
    if (e1.size() != 0 && e1.size() != Eigen::Index(sr.size()))
        throw validation_error("measure: noise length mismatch");

    MeasureResult res;
    res.ytilde.resize(Eigen::Index(sr.size()));
    res.truncation = Eigen::VectorXd::Zero(Eigen::Index(sr.size()));
    const Eigen::Index tail = std::max<Eigen::Index>(x.size() - op.K, 0);
    for (std::size_t i = 0; i < sr.size(); ++i) {
        const auto row = op.section.entries.row(sr[i].first);
        res.ytilde(Eigen::Index(i)) = sr[i].second * row.head(x.size()).dot(x);
        if (tail > 0)
            res.truncation(Eigen::Index(i)) =
                sr[i].second * row.segment(op.K, tail).dot(x.tail(tail));
    }
    if (e1.size() > 0) res.ytilde += e1;
    return res;
}

double allocation_log_factor(const LevelScheme& scheme, double m_tilde, double eps) {
    const double r = scheme.levels();
    const double Nr = scheme.N(scheme.levels() - 1);
    const double total_s = std::max<double>(scheme.s.sum(), 1);
    const double lt = std::log(2.0 * std::max(m_tilde, 1.0));
    const double ln = std::log(2.0 * Nr);
    const double ls = std::log(2.0 * total_s);
    return r * lt * ln * ls * ls + std::log(1.0 / eps);
}

namespace {

Eigen::VectorXi allocate_impl(const LevelScheme& scheme, double eps,
                              const std::function<double(int)>& bracket_prefactor) {
    scheme.validate(false);
    if (eps <= 0 || eps >= 1) throw validation_error("allocate: eps must be in (0,1)");
    const int r = scheme.levels();

    Eigen::VectorXi m(r);
    double m_tilde = 0;
    for (int k = scheme.r0; k < r; ++k) m_tilde += scheme.sampling_width(k);

    bool converged = false;
    for (int pass = 0; pass < 8 && !converged; ++pass) {
        const double L = allocation_log_factor(scheme, m_tilde, eps);
        double next_tilde = 0;
        for (int k = 0; k < r; ++k) {
            const int width = scheme.sampling_width(k);
            if (k < scheme.r0) {
                m(k) = width;
                continue;
            }
            const double raw = bracket_prefactor(k) * L;
            const double capped = std::min<double>(width, std::ceil(raw));
            m(k) = int(std::max(capped, 1.0));
            next_tilde += m(k);
        }
        converged = std::abs(next_tilde - m_tilde) < 0.5;
        m_tilde = next_tilde;
    }
    if (!converged)
        for (int k = 0; k < r; ++k) m(k) = scheme.sampling_width(k);
    return m;
}

} // namespace

Eigen::VectorXi allocate_samples(const LevelScheme& scheme, double delta, double theta,
                                 double eps, int q, double c_univ) {
    if (delta <= 0 || theta <= 0 || c_univ <= 0)
        throw validation_error("allocate_samples: delta, theta, c_univ must be positive");
    const int r = scheme.levels();
    return allocate_impl(scheme, eps, [&](int k) {
        double bracket = 0;
        for (int l = 0; l < int(scheme.s.size()); ++l)
            bracket += std::pow(2.0, -std::abs(k - l)) * scheme.s(l);
        const double boost = std::pow(2.0, double(q) * std::max(k + 2 - r, 0));
        return c_univ / (delta * delta) / theta * boost * bracket;
    });
}

Eigen::VectorXi general_allocate(const LevelScheme& scheme, const Eigen::MatrixXd& mu,
                                 double delta, double g_inv_norm, double eps, double c_univ) {
    if (delta <= 0 || g_inv_norm <= 0 || c_univ <= 0)
        throw validation_error("general_allocate: delta, |G^-1|, c_univ must be positive");
    if (mu.rows() < scheme.levels() || mu.cols() < scheme.s.size())
        throw validation_error("general_allocate: coherence table too small");
    return allocate_impl(scheme, eps, [&](int k) {
        double bracket = 0;
        for (int l = 0; l < int(scheme.s.size()); ++l) bracket += mu(k, l) * scheme.s(l);
        return c_univ / (delta * delta) * g_inv_norm * g_inv_norm * scheme.sampling_width(k) *
               bracket;
    });
}

} // namespace cslab
