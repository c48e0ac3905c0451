#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "cslab/errors.hpp"
#include "cslab/wavelet.hpp"

using namespace cslab;

TEST_CASE("filter invariants for every embedded filter") {
    for (int nu = 1; nu <= 10; ++nu) {
        for (WaveletFamily fam : {WaveletFamily::MinimumPhase, WaveletFamily::Symlet}) {
            if (fam == WaveletFamily::Symlet && nu == 1) continue;
            const Eigen::VectorXd h = filter_taps(nu, fam);
            REQUIRE(h.size() == 2 * nu);
            REQUIRE(std::abs(h.sum() - std::sqrt(2.0)) <= 1e-12);
            for (int m = 0; m < nu; ++m) {
                double dot = 0;
                for (int k = 0; k + 2 * m < 2 * nu; ++k) dot += h(k) * h(k + 2 * m);
                REQUIRE(std::abs(dot - (m == 0 ? 1.0 : 0.0)) <= 1e-10);
            }
        }
    }
    CHECK_THROWS_AS(filter_taps(11, WaveletFamily::MinimumPhase), validation_error);
    CHECK_THROWS_AS(filter_taps(1, WaveletFamily::Symlet), validation_error);
}

TEST_CASE("filter data file stays in sync with the embedded constants") {
    std::ifstream in(std::string(CSLAB_DATA_DIR) + "/wavelet_filters.txt");
    REQUIRE(in.good());
    std::string line;
    int count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        int nu;
        std::string family;
        ss >> nu >> family;
        const WaveletFamily fam =
            family == "symlet" ? WaveletFamily::Symlet : WaveletFamily::MinimumPhase;
        const Eigen::VectorXd h = filter_taps(nu, fam);
        for (Eigen::Index k = 0; k < h.size(); ++k) {
            double v;
            REQUIRE(bool(ss >> v));
            REQUIRE(v == doctest::Approx(h(k)).epsilon(1e-15));
        }
        ++count;
    }
    CHECK(count == 19);
}

TEST_CASE("WaveletSystem validation") {
    CHECK_NOTHROW(WaveletSystem::create(1, 0));
    CHECK_NOTHROW(WaveletSystem::create(4, 3));
    CHECK_THROWS_AS(WaveletSystem::create(4, 2), validation_error); // 2^2 < 8
    CHECK_THROWS_AS(WaveletSystem::create(0, 0), validation_error);

    CHECK(WaveletSystem::create(2, 2).alpha == doctest::Approx(0.55));
    CHECK(WaveletSystem::create(3, 3).alpha == doctest::Approx(1.08));
    CHECK(WaveletSystem::create(4, 3).alpha == doctest::Approx(1.61));
    CHECK_FALSE(WaveletSystem::create(2, 2).has_recovery_guarantee());
    CHECK(WaveletSystem::create(3, 3).has_recovery_guarantee());
}

TEST_CASE("BasisIndex ordering follows the basis layout") {
    // J0 = 2: positions 0..3 scaling at j=2, 4..7 wavelets at j=2, 8..15 at j=3
    const BasisIndex a = BasisIndex::from_position(2, 0);
    CHECK((a.j == 2 && a.k == 0 && a.s == 0));
    const BasisIndex b = BasisIndex::from_position(2, 5);
    CHECK((b.j == 2 && b.k == 1 && b.s == 1));
    const BasisIndex c = BasisIndex::from_position(2, 11);
    CHECK((c.j == 3 && c.k == 3 && c.s == 1));
    for (Eigen::Index p = 0; p < 64; ++p)
        CHECK(BasisIndex::from_position(2, p).position(2) == p);
    CHECK_THROWS_AS((BasisIndex{3, 0, 0}.position(2)), validation_error);
}

TEST_CASE("cascade: Haar is exact") {
    const WaveletSystem haar = WaveletSystem::create(1, 0);
    for (int q : {0, 3, 6}) {
        const GridFunction phi = cascade_refine(haar, 0, q);
        CHECK(phi.values.size() == (1 << q));
        CHECK(phi.values.minCoeff() == 1.0);
        CHECK(phi.values.maxCoeff() == 1.0);
    }
    const GridFunction psi = cascade_refine(haar, 1, 3);
    CHECK(psi.values.head(4).minCoeff() == 1.0);
    CHECK(psi.values.tail(4).maxCoeff() == -1.0);
}

TEST_CASE("cascade: integral of phi is 1") {
    for (int nu : {2, 4, 6}) {
        const WaveletSystem sys = WaveletSystem::create(nu, 4);
        const GridFunction phi = cascade_refine(sys, 0, 12);
        const double integral = phi.values.sum() * std::pow(0.5, 12);
        REQUIRE(std::abs(integral - 1.0) <= 2e-3);
    }
}

TEST_CASE("cascade: psi has nu vanishing moments") {
    for (int nu : {2, 3, 4}) {
        const WaveletSystem sys = WaveletSystem::create(nu, 4);
        const int q = 14;
        const GridFunction psi = cascade_refine(sys, 1, q);
        const double dx = std::pow(0.5, q);
        for (int mom = 0; mom < nu; ++mom) {
            double acc = 0;
            for (Eigen::Index i = 0; i < psi.values.size(); ++i) {
                const double x = -nu + 1 + double(i) * dx; // support starts at -nu+1
                acc += std::pow(x, mom) * psi.values(i);
            }
            REQUIRE(std::abs(acc * dx) <= 1e-3);
        }
    }
}

TEST_CASE("cascade: sup-norm refinement differences decay at the regularity rate") {
    const WaveletSystem sys = WaveletSystem::create(2, 2); // alpha = 0.55
    std::vector<double> diffs;
    for (int q = 6; q <= 10; ++q) {
        const GridFunction coarse = cascade_refine(sys, 0, q);
        const GridFunction fine = cascade_refine(sys, 0, q + 1);
        double d = 0;
        for (Eigen::Index i = 0; i < coarse.values.size(); ++i)
            d = std::max(d, std::abs(fine.values(2 * i) - coarse.values(i)) +
                                std::abs(fine.values(2 * i + 1) - coarse.values(i)));
        diffs.push_back(d);
    }
    // effective rate over 4 doublings; allow generous slack around alpha
    const double rate = std::log2(diffs.front() / diffs.back()) / double(diffs.size() - 1);
    CHECK(rate >= std::min(sys.alpha, 1.0) - 0.15);
}

TEST_CASE("cascade rejects a defective filter") {
    WaveletSystem sys = WaveletSystem::create(2, 2);
    sys.lowpass << 0.5, 0.5, 0.5, 0.5; // fails the two-scale eigen structure
    CHECK_THROWS_AS(cascade_refine(sys, 0, 4), validation_error);
}

TEST_CASE("periodized averages: Haar scaling column") {
    const WaveletSystem haar = WaveletSystem::create(1, 2);
    const GridFunction g = periodized_cell_averages(haar, BasisIndex{2, 1, 0}, 2);
    // phi_{2,1}: value 2 on cell 1
    CHECK(g.values(0) == 0.0);
    CHECK(g.values(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.values(2) == 0.0);
    CHECK(g.values(3) == 0.0);
}

TEST_CASE("periodized averages: interior support and translation covariance") {
    const WaveletSystem db4 = WaveletSystem::create(4, 4);
    const int d = 10;
    const BasisIndex idx{4, 5, 0};
    const GridFunction g = periodized_cell_averages(db4, idx, d);

    // support inside [2^-j(k-nu+1), 2^-j(k+nu)]
    const Eigen::Index lo = Eigen::Index(idx.k - db4.nu + 1) << (d - idx.j);
    const Eigen::Index hi = Eigen::Index(idx.k + db4.nu) << (d - idx.j);
    for (Eigen::Index i = 0; i < g.values.size(); ++i)
        if (g.values(i) != 0.0) REQUIRE((i >= lo && i < hi));

    // a neighbor translate is the circular shift by 2^{d-j} cells
    const GridFunction h = periodized_cell_averages(db4, BasisIndex{4, 6, 0}, d);
    const Eigen::Index shift = Eigen::Index(1) << (d - idx.j);
    for (Eigen::Index i = 0; i < g.values.size(); ++i)
        REQUIRE(h.values((i + shift) % h.values.size()) ==
                doctest::Approx(g.values(i)).epsilon(1e-13));
}

TEST_CASE("periodized averages: unit L2 norm and seam mass preservation") {
    const WaveletSystem db4 = WaveletSystem::create(4, 4);
    const int d = 14; // j + 10
    for (const BasisIndex idx : {BasisIndex{4, 0, 0}, BasisIndex{4, 14, 1}, BasisIndex{4, 7, 0}}) {
        const GridFunction g = periodized_cell_averages(db4, idx, d);
        REQUIRE(g.l2_norm() == doctest::Approx(1.0).epsilon(2e-3));
    }
    // periodization moves mass across the seam without losing any
    const Eigen::VectorXd base = support_cell_averages(db4, 0, 10);
    const GridFunction wrapped = periodized_cell_averages(db4, BasisIndex{4, 0, 0}, 14);
    const double expect = std::pow(2.0, 2.0) * base.sum(); // 2^{j/2} scale
    CHECK(wrapped.values.sum() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("grid-level orthonormality of 8 representatives") {
    const WaveletSystem db4 = WaveletSystem::create(4, 4);
    const int d = 15;
    std::vector<BasisIndex> idxs = {{4, 0, 0}, {4, 9, 0}, {4, 3, 1}, {4, 12, 1},
                                    {5, 7, 1}, {5, 30, 1}, {4, 15, 0}, {5, 0, 1}};
    std::vector<Eigen::VectorXd> reps;
    for (const auto& idx : idxs)
        reps.push_back(periodized_cell_averages(db4, idx, d).values);
    const double cell = std::pow(0.5, d);
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = 0; b < reps.size(); ++b) {
            const double ip = reps[a].dot(reps[b]) * cell;
            REQUIRE(std::abs(ip - (a == b ? 1.0 : 0.0)) <= 5e-3);
        }
}

TEST_CASE("two-scale consistency of cell averages") {
    // averages computed directly at depth q match the filter combination of
    // depth-q averages of the children (the refinement relation is exact)
    const WaveletSystem db4 = WaveletSystem::create(4, 4);
    const int q = 8;
    const Eigen::VectorXd a_half = support_cell_averages(db4, 0, q - 1);
    const Eigen::VectorXd a = support_cell_averages(db4, 0, q);
    const Eigen::Index stride = Eigen::Index(1) << (q - 1);
    double err = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double acc = 0;
        for (int k = 0; k < 8; ++k) {
            const Eigen::Index src = i - k * stride;
            if (src >= 0 && src < a_half.size()) acc += db4.lowpass(k) * a_half(src);
        }
        err = std::max(err, std::abs(std::sqrt(2.0) * acc - a(i)));
    }
    CHECK(err <= 1e-13);
}

TEST_CASE("average-based and point-based representations agree in the limit") {
    const WaveletSystem db3 = WaveletSystem::create(3, 3);
    const int q = 12;
    const Eigen::VectorXd avg = support_cell_averages(db3, 0, q);
    const GridFunction pts = cascade_refine(db3, 0, q);
    double err = 0;
    for (Eigen::Index i = 0; i < avg.size(); ++i)
        err = std::max(err, std::abs(avg(i) - pts.values(i)));
    CHECK(err <= 2e-3); // modulus of continuity at 2^-q
}

TEST_CASE("periodized averages input validation") {
    const WaveletSystem db4 = WaveletSystem::create(4, 4);
    CHECK_THROWS_AS(periodized_cell_averages(db4, BasisIndex{4, 0, 0}, 3), validation_error);
    CHECK_THROWS_AS(periodized_cell_averages(db4, BasisIndex{4, 16, 0}, 8), validation_error);
    CHECK_THROWS_AS(periodized_cell_averages(db4, BasisIndex{2, 0, 0}, 8), validation_error);
}

TEST_CASE("periodic DWT is orthonormal and invertible") {
    const WaveletSystem db4 = WaveletSystem::create(4, 3);
    const Eigen::Index n = 32;
    Eigen::MatrixXd psi(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(j) = 1.0;
        psi.col(j) = dwt_periodic_analysis(db4, e, 3);
    }
    const Eigen::MatrixXd gram = psi.transpose() * psi;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = std::sin(0.3 * double(i));
    const Eigen::VectorXd round = dwt_periodic_synthesis(db4, dwt_periodic_analysis(db4, v, 3), 3);
    CHECK((round - v).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("symlets are closer to linear phase than minimum phase") {
    // crude asymmetry proxy: center-of-mass distance of |h|^2 from midpoint
    auto asym = [](const Eigen::VectorXd& h) {
        double com = 0;
        for (Eigen::Index k = 0; k < h.size(); ++k) com += double(k) * h(k) * h(k);
        const double mid = double(h.size() - 1) / 2.0;
        double spread = 0;
        for (Eigen::Index k = 0; k < h.size(); ++k)
            spread += std::abs(double(k) - com) * h(k) * h(k);
        (void)mid;
        return spread;
    };
    for (int nu : {4, 6, 8}) {
        const Eigen::VectorXd hd = filter_taps(nu, WaveletFamily::MinimumPhase);
        const Eigen::VectorXd hs = filter_taps(nu, WaveletFamily::Symlet);
        CHECK(asym(hs) <= asym(hd));
    }
}
