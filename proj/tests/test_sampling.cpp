#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cslab/analysis.hpp"
#include "cslab/errors.hpp"
#include "cslab/sampling.hpp"

using namespace cslab;

namespace {

LevelScheme haar_scheme(int J0, int r) {
    LevelScheme sch;
    sch.N.resize(r);
    sch.M.resize(r);
    sch.s = Eigen::VectorXi::Ones(r);
    sch.m.resize(r);
    for (int k = 0; k < r; ++k) {
        sch.N(k) = sch.M(k) = 1 << (J0 + 1 + k);
        sch.m(k) = sch.N(k) - (k == 0 ? 0 : sch.N(k - 1));
    }
    sch.r0 = 0;
    return sch;
}

} // namespace

TEST_CASE("LevelScheme validation") {
    LevelScheme sch = haar_scheme(0, 3);
    CHECK_NOTHROW(sch.validate(true));

    LevelScheme bad = sch;
    bad.N(1) = bad.N(0);
    CHECK_THROWS_AS(bad.validate(false), validation_error);

    bad = sch;
    bad.s(2) = 100;
    CHECK_THROWS_AS(bad.validate(false), validation_error);

    bad = sch;
    bad.r0 = 2;
    bad.m(0) = 1; // saturated level must be full
    CHECK_THROWS_AS(bad.validate(true), validation_error);
}

TEST_CASE("draw_pattern: saturated levels take the whole range, deterministically") {
    LevelScheme sch = haar_scheme(0, 3); // m = widths
    const SamplingPattern pat = draw_pattern(sch, 99);
    Eigen::Index count = 0;
    for (std::size_t k = 0; k < pat.rows.size(); ++k) {
        const int lo = (k == 0) ? 0 : sch.N(int(k) - 1);
        for (std::size_t i = 0; i < pat.rows[k].size(); ++i)
            REQUIRE(pat.rows[k][i] == lo + int(i));
        count += Eigen::Index(pat.rows[k].size());
    }
    CHECK(count == sch.N(2));
    CHECK((pat.p.array() == 1.0).all());
}

TEST_CASE("draw_pattern: identical across runs for a fixed seed") {
    LevelScheme sch = haar_scheme(1, 3); // widths 4, 4, 8
    sch.m << 2, 3, 5;
    const SamplingPattern a = draw_pattern(sch, 1234);
    const SamplingPattern b = draw_pattern(sch, 1234);
    const SamplingPattern c = draw_pattern(sch, 1235);
    CHECK(a.rows == b.rows);
    CHECK(a.rows != c.rows);
}

TEST_CASE("draw_pattern: uniform frequencies within a level") {
    LevelScheme sch;
    sch.N.resize(2);
    sch.N << 2, 4;
    sch.M = sch.N;
    sch.s = Eigen::VectorXi::Ones(2);
    sch.m.resize(2);
    sch.m << 2, 1;
    sch.r0 = 1;
    const int draws = 10000;
    Eigen::Vector2i hits = Eigen::Vector2i::Zero();
    for (int t = 0; t < draws; ++t) {
        const SamplingPattern pat = draw_pattern(sch, std::uint64_t(t));
        REQUIRE(pat.rows[1].size() == 1);
        hits(pat.rows[1][0] - 2) += 1;
    }
    // binomial(10^4, 1/2): 3 sigma = 150
    CHECK(std::abs(hits(0) - draws / 2) <= 150);
    CHECK(hits(0) + hits(1) == draws);
}

TEST_CASE("measure: Haar full sampling preserves the norm, matches the dense oracle") {
    const WaveletSystem haar = WaveletSystem::create(1, 1);
    LevelScheme sch = haar_scheme(1, 3); // N = M = 16, full
    const SectionMatrix sec = assemble_section(haar, 16, 16, 6);
    const MeasurementOperator op =
        make_operator(sch, draw_pattern(sch, 0), sec, 16);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd x(16);
    for (Eigen::Index i = 0; i < 16; ++i) x(i) = gauss(rng);

    const MeasureResult res = measure(op, x, Eigen::VectorXd());
    CHECK(std::abs(res.ytilde.norm() - x.norm()) <= 1e-12 * x.norm());
    CHECK(res.truncation.norm() == 0.0);

    // dense oracle: D P_Omega U x computed from the raw section rows
    Eigen::VectorXd oracle(16);
    Eigen::Index row = 0;
    for (std::size_t k = 0; k < op.pattern.rows.size(); ++k)
        for (int n : op.pattern.rows[k])
            oracle(row++) = sec.entries.row(n).dot(x) / std::sqrt(op.pattern.p(Eigen::Index(k)));
    CHECK((res.ytilde - oracle).cwiseAbs().maxCoeff() <= 1e-12);

    const MeasureResult zero = measure(op, Eigen::VectorXd::Zero(16), Eigen::VectorXd());
    CHECK(zero.ytilde.norm() == 0.0);
}

TEST_CASE("measure: truncation beyond K is reported separately") {
    const WaveletSystem db4 = WaveletSystem::create(4, 4); // overlapping scales
    LevelScheme sch;
    sch.N.resize(1);
    sch.N << 16;
    sch.M = sch.N;
    sch.s = Eigen::VectorXi::Ones(1);
    sch.m = sch.N;
    sch.r0 = 1;
    const SectionMatrix sec = assemble_section(db4, 16, 32, 8);
    const MeasurementOperator op = make_operator(sch, draw_pattern(sch, 0), sec, 16);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(32);
    x(3) = 1.0;
    x(20) = 2.0; // beyond K = 16
    const MeasureResult res = measure(op, x, Eigen::VectorXd());
    Eigen::VectorXd inside = Eigen::VectorXd::Zero(32);
    inside(3) = 1.0;
    const MeasureResult only_inside = measure(op, inside, Eigen::VectorXd());
    CHECK(res.truncation.norm() > 0.0);
    CHECK((res.ytilde - only_inside.ytilde - res.truncation).cwiseAbs().maxCoeff() <= 1e-12);

    // Haar with K = M has no tail at all: H P_M-perp vanishes on the section
    const WaveletSystem haar = WaveletSystem::create(1, 1);
    const SectionMatrix hsec = assemble_section(haar, 16, 32, 6);
    LevelScheme hsch = haar_scheme(1, 3);
    const MeasurementOperator hop = make_operator(hsch, draw_pattern(hsch, 0), hsec, 16);
    Eigen::VectorXd hx = Eigen::VectorXd::Zero(32);
    hx(20) = 1.0;
    CHECK(measure(hop, hx, Eigen::VectorXd()).ytilde.norm() <= 1e-14);
}

TEST_CASE("scaling block structure: rows of a level share one 1/sqrt(p_k) factor") {
    const WaveletSystem haar = WaveletSystem::create(1, 1);
    LevelScheme sch = haar_scheme(1, 3);
    sch.m << 4, 3, 5;
    sch.r0 = 1;
    const SamplingPattern pat = draw_pattern(sch, 5);
    const SectionMatrix sec = assemble_section(haar, 16, 16, 6);
    const MeasurementOperator op = make_operator(sch, pat, sec, 16);
    const Eigen::MatrixXd A = op.dense_matrix();

    Eigen::Index row = 0;
    for (std::size_t k = 0; k < pat.rows.size(); ++k) {
        const double scale = 1.0 / std::sqrt(pat.p(Eigen::Index(k)));
        for (int n : pat.rows[k]) {
            // removing and re-applying the scale is bit-identical
            const Eigen::VectorXd unscaled = A.row(row) / scale;
            const Eigen::VectorXd rescaled = unscaled * scale;
            REQUIRE((rescaled.transpose() - A.row(row)).cwiseAbs().maxCoeff() == 0.0);
            REQUIRE((unscaled.transpose() - sec.entries.row(n)).cwiseAbs().maxCoeff() <= 1e-15);
            ++row;
        }
    }
}

TEST_CASE("expectation identity: mean of A^T A over patterns approaches G^2") {
    const WaveletSystem haar = WaveletSystem::create(1, 1);
    LevelScheme sch = haar_scheme(1, 3); // 16 columns
    sch.m << 4, 3, 6;
    sch.r0 = 1;
    const SectionMatrix sec = assemble_section(haar, 16, 16, 6);
    const Eigen::MatrixXd G2 =
        sec.entries.transpose() * sec.entries; // identity for Haar, but use the true Gram

    const int trials = 10000;
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(16, 16);
    Eigen::MatrixXd meansq = Eigen::MatrixXd::Zero(16, 16);
    for (int t = 0; t < trials; ++t) {
        const MeasurementOperator op =
            make_operator(sch, draw_pattern(sch, std::uint64_t(t)), sec, 16);
        const Eigen::MatrixXd A = op.dense_matrix();
        const Eigen::MatrixXd gram = A.transpose() * A;
        mean += gram;
        meansq += gram.cwiseAbs2();
    }
    mean /= trials;
    meansq /= trials;
    const Eigen::MatrixXd variance = meansq - mean.cwiseAbs2();
    for (Eigen::Index i = 0; i < 16; ++i)
        for (Eigen::Index j = 0; j < 16; ++j) {
            const double sd = std::sqrt(std::max(variance(i, j), 0.0) / trials);
            REQUIRE(std::abs(mean(i, j) - G2(i, j)) <= std::max(5.0 * sd, 1e-12));
        }
}

TEST_CASE("allocate_samples: saturated levels and the hand arithmetic case") {
    LevelScheme sch;
    sch.N.resize(1);
    sch.N << 8;
    sch.M = sch.N;
    sch.s = Eigen::VectorXi::Ones(1);
    sch.r0 = 0;

    // r=1, s=(1), delta=theta=1, eps=1/2, C=1, q=0:
    // bracket = 1, L converges with m~: L(m~) = log(2 m~) log(16) log(2)^2 + log 2
    Eigen::VectorXi m = allocate_samples(sch, 1.0, 1.0, 0.5, 0, 1.0);
    double mt = 8;
    for (int pass = 0; pass < 8; ++pass) {
        const double L = std::log(2 * mt) * std::log(16.0) * std::pow(std::log(2.0), 2) +
                         std::log(2.0);
        mt = std::min(8.0, std::ceil(L));
    }
    CHECK(m(0) == int(mt));

    // saturated levels take full width regardless of the formula
    LevelScheme sat = sch;
    sat.N.resize(2);
    sat.N << 8, 16;
    sat.M = sat.N;
    sat.s = Eigen::VectorXi::Ones(2);
    sat.r0 = 1;
    const Eigen::VectorXi ms = allocate_samples(sat, 0.5, 0.5, 0.1, 0, 1e-6);
    CHECK(ms(0) == 8);
}

TEST_CASE("allocate_samples: doubling s_k doubles the pre-cap allocation") {
    LevelScheme sch;
    const int r = 3;
    sch.N.resize(r);
    sch.N << 1024, 2048, 4096; // wide levels so no cap bites
    sch.M = sch.N;
    sch.s.resize(r);
    sch.s << 4, 2, 1;
    sch.r0 = 0;
    const double c = 1e-2; // keep allocations small and uncapped
    const Eigen::VectorXi base = allocate_samples(sch, 1.0, 1.0, 0.5, 0, c);

    LevelScheme doubled = sch;
    doubled.s(1) *= 2;
    const Eigen::VectorXi big = allocate_samples(doubled, 1.0, 1.0, 0.5, 0, c);
    // bracket at k=1: sum 2^-|k-l| s_l doubles only through the s_1 term;
    // compare against the recomputed bracket ratio instead of exactly 2x
    double b0 = 0, b1 = 0;
    for (int l = 0; l < r; ++l) {
        b0 += std::pow(2.0, -std::abs(1 - l)) * sch.s(l);
        b1 += std::pow(2.0, -std::abs(1 - l)) * doubled.s(l);
    }
    CHECK(double(big(1)) == doctest::Approx(std::ceil(double(base(1)) / b0 * b1)).epsilon(0.35));

    // pure-bracket linearity: with only level k occupied, doubling s_k
    // doubles the bracket exactly
    LevelScheme lone = sch;
    lone.s << 0, 2, 0;
    LevelScheme lone2 = sch;
    lone2.s << 0, 4, 0;
    // keep log factor identical by comparing brackets directly
    double lb = 0, lb2 = 0;
    for (int l = 0; l < r; ++l) {
        lb += std::pow(2.0, -std::abs(1 - l)) * lone.s(l);
        lb2 += std::pow(2.0, -std::abs(1 - l)) * lone2.s(l);
    }
    CHECK(lb2 == doctest::Approx(2 * lb));
}

TEST_CASE("general_allocate: Haar coherences reduce the bracket to s_k") {
    // mu_{k,k} = 2^{-J0-k+1}, zero off-diagonal: width_k * mu_{k,k} = 1
    const int J0 = 1, r = 3;
    LevelScheme sch = haar_scheme(J0, r);
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(r, r);
    for (int k = 0; k < r; ++k) mu(k, k) = std::pow(2.0, -J0 - (k + 1) + 1);
    sch.s << 3, 2, 5;

    const double delta = 0.5, eps = 0.25, c = 1e-3;
    const Eigen::VectorXi m = general_allocate(sch, mu, delta, 1.0, eps, c);
    // expected: ceil(c delta^-2 s_k L) capped, with the same fixed point
    double mt = 0;
    for (int k = 0; k < r; ++k) mt += sch.sampling_width(k);
    Eigen::VectorXi expect(r);
    for (int pass = 0; pass < 8; ++pass) {
        const double L = allocation_log_factor(sch, mt, eps);
        double next = 0;
        for (int k = 0; k < r; ++k) {
            const double raw = c / (delta * delta) * 1.0 * sch.sampling_width(k) *
                               (mu(k, k) * sch.s(k)) * L;
            expect(k) = int(std::max(1.0, std::min<double>(sch.sampling_width(k), std::ceil(raw))));
            next += expect(k);
        }
        mt = next;
    }
    CHECK(m == expect);

    // monotone in each coherence entry
    Eigen::MatrixXd mu_up = mu;
    mu_up(1, 1) *= 4.0;
    const Eigen::VectorXi m_up = general_allocate(sch, mu_up, delta, 1.0, eps, c);
    for (int k = 0; k < r; ++k) CHECK(m_up(k) >= m(k));
}

TEST_CASE("pattern CSV serialization") {
    LevelScheme sch = haar_scheme(1, 2); // widths 4, 4
    sch.m << 2, 3;
    const SamplingPattern pat = draw_pattern(sch, 77);
    const std::string path = "/tmp/pattern_test.csv";
    write_pattern_csv(pat, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "level,row_index");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);
}
