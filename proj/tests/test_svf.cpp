#include <cmath>

#include "affdim/expm.hpp"
#include "affdim/svf.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace affdim;
using testutil::CounterRng;

namespace {

Matrix diag2(double a, double b) {
    Matrix M = Matrix::Zero(2, 2);
    M(0, 0) = a;
    M(1, 1) = b;
    return M;
}

SpectrumSummary spec_1x1(double aVal, double lamVal) {
    return make_spectrum_summary({{aVal, 1}}, {{lamVal, 1}});
}

}  // namespace

TEST_CASE("phi on a diagonal contraction") {
    Matrix W = diag2(0.5, 0.25);
    CHECK(phi(W, 2.0) == doctest::Approx(0.125).epsilon(1e-13));   // |det W|
    CHECK(phi(W, 1.0) == doctest::Approx(0.5).epsilon(1e-13));     // largest singular value
    CHECK(phi(W, 1.5) == doctest::Approx(0.25).epsilon(1e-13));    // 0.5 * 0.25^0.5
}

TEST_CASE("phi domain errors") {
    Matrix W = diag2(0.5, 0.25);
    CHECK_THROWS_AS(phi(W, 0.0), DomainError);
    CHECK_THROWS_AS(phi(W, 2.5), DomainError);
    CHECK_THROWS_AS(phi(Matrix::Identity(2, 2) * 1.5, 1.0), DomainError);  // not contracting
    Matrix S = Matrix::Zero(2, 2);
    S(0, 0) = 0.5;
    CHECK_THROWS_AS(phi(S, 1.0), DomainError);  // singular
}

TEST_CASE("phi is strictly decreasing and log phi piecewise linear") {
    CounterRng rng(31, 1);
    for (int trial = 0; trial < 40; ++trial) {
        Matrix W = testutil::random_sv_contraction(4, rng, 0.55 + 0.4 * rng.uniform01());
        double prev = std::numeric_limits<double>::infinity();
        for (double s = 0.25; s <= 4.0; s += 0.25) {
            const double v = phi(W, s);
            CHECK(v < prev);
            prev = v;
        }
        // within each integer segment the second difference of log phi vanishes
        for (int seg = 0; seg < 4; ++seg) {
            const double s0 = seg + 0.2, s1 = seg + 0.5, s2 = seg + 0.8;
            const double d2 = log_phi(W, s2) - 2.0 * log_phi(W, s1) + log_phi(W, s0);
            CHECK(std::abs(d2) < 1e-10);
        }
    }
}

TEST_CASE("phi submultiplicativity") {
    CounterRng rng(31, 2);
    for (int trial = 0; trial < 1000; ++trial) {
        Matrix A = testutil::random_sv_contraction(2, rng, 0.3 + 0.6 * rng.uniform01());
        Matrix B = testutil::random_sv_contraction(2, rng, 0.3 + 0.6 * rng.uniform01());
        const double s = 0.1 + 1.9 * rng.uniform01();
        CHECK(log_phi(A * B, s) <= log_phi(A, s) + log_phi(B, s) + 1e-12);
    }
}

TEST_CASE("growth_rate worked values") {
    // diag(0.5, 0.5^0.5): descending singular values 0.5^0.5, 0.5; at r = 1.5
    // the exponent is 0.5 + 1*(r-1) = 1, so the rate is log(0.5) exactly.
    Matrix W = diag2(0.5, std::sqrt(0.5));
    CHECK(growth_rate(W, 1.5) == doctest::Approx(std::log(0.5)).epsilon(1e-10));

    Matrix S = 0.6 * Matrix::Identity(2, 2);
    CHECK(growth_rate(S, 2.0) == doctest::Approx(2.0 * std::log(0.6)).epsilon(1e-12));
}

TEST_CASE("growth_rate is invariant under orthogonal conjugation") {
    CounterRng rng(31, 3);
    auto pair = testutil::random_pair(rng, 2, 1, 0.5);
    Matrix W = matrix_power_scale(direct_sum(pair.E, pair.D), pair.c);
    Matrix Q = testutil::random_orthogonal(3, rng);
    Matrix Wc = Q * W * Q.transpose();
    for (double r : {0.7, 1.5, 2.3, 3.0})
        CHECK(growth_rate(W, r) == doctest::Approx(growth_rate(Wc, r)).epsilon(1e-6));
}

TEST_CASE("growth_rate reports the last two estimates when the schedule is too short") {
    // skew-conjugated rotation ties converge slowly; a tiny ceiling with an
    // unreachable tolerance must fail loudly
    CounterRng rng(31, 9);
    Matrix R = 0.62 * testutil::rotation_block(std::cos(0.9), std::sin(0.9));
    Matrix S = Matrix::Zero(2, 2);
    S(0, 0) = 3.0;
    S(1, 1) = 0.4;
    Matrix P = testutil::random_orthogonal(2, rng) * S;
    Matrix W = P * R * P.inverse() / (1.05 * singular_values(P * R * P.inverse())(0));
    KSchedule sched;
    sched.kMax = 512;
    sched.tol = 1e-15;
    try {
        growth_rate(W, 1.5, sched);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("last two estimates") != std::string::npos);
    }
}

TEST_CASE("s_numeric worked values") {
    SUBCASE("Brownian graph matrix") {
        Matrix W = diag2(0.5, std::sqrt(0.5));
        auto r = s_numeric(W, 0.5);
        CHECK(r.s == doctest::Approx(1.5).epsilon(1e-8));
        CHECK(r.caseTag == SCase::interior);
        CHECK(r.method == SMethod::numeric);
        CHECK(std::abs(r.residual) <= 1e-6);
    }
    SUBCASE("scalar matrix saturates at the full order") {
        Matrix W = 0.6 * Matrix::Identity(2, 2);
        auto r = s_numeric(W, 0.36);
        CHECK(r.s == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(r.caseTag == SCase::saturated);
    }
    SUBCASE("rotation block agrees with the closed form 5/3") {
        ExponentPair p;
        p.E = Matrix::Constant(1, 1, 1.0);
        p.D = testutil::rotation_block(0.6, 0.4);
        p.c = 0.5;
        Matrix W = matrix_power_scale(direct_sum(p.E, p.D), p.c);
        auto r = s_numeric(W, 0.5);
        CHECK(std::abs(r.s - 5.0 / 3.0) <= 1e-4);
    }
    SUBCASE("domain errors") {
        Matrix W = diag2(0.5, 0.25);
        CHECK_THROWS_AS(s_numeric(W, 1.5), DomainError);
        CHECK_THROWS_AS(s_numeric(W, 0.0), DomainError);
        CHECK_THROWS_AS(s_numeric(Matrix::Identity(2, 2) * 2.0, 0.5), DomainError);
    }
}

TEST_CASE("s_closed_graph worked values") {
    CHECK(s_closed_graph(spec_1x1(1.0, 0.5)).s == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(s_closed_graph(spec_1x1(1.0, 0.5)).branchIndex == 2);

    auto s2 = make_spectrum_summary({{1.0, 1}, {3.0, 1}}, {{0.5, 1}});
    CHECK(s_closed_graph(s2).s == doctest::Approx(17.0 / 6.0).epsilon(1e-14));
    CHECK(s_closed_graph(s2).branchIndex == 3);

    auto s3 = make_spectrum_summary({{1.0, 2}}, {{0.7, 1}});
    CHECK(s_closed_graph(s3).s == doctest::Approx(2.3).epsilon(1e-14));  // d + 1 - H
}

TEST_CASE("s_closed_graph boundary tie lands on the integer") {
    // q = 2 lambda = gamma_1 + gamma_2 exactly, so s = r = 2
    for (double lam : {0.3, 0.5, 0.7251}) {
        auto s = make_spectrum_summary({{2.0 * lam, 1}}, {{lam, 2}});
        auto r = s_closed_graph(s);
        CHECK(r.s == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(r.branchIndex == 2);
    }
}

TEST_CASE("s_closed_graph stays above d") {
    CounterRng rng(37, 1);
    for (int trial = 0; trial < 300; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_u64() % 3);
        const int m = 1 + static_cast<int>(rng.next_u64() % 3);
        std::vector<SpectralLine> a, lam;
        for (int i = 0; i < d; ++i) a.push_back({0.5 + 3.0 * rng.uniform01(), 1});
        for (int i = 0; i < m; ++i) lam.push_back({0.1 + 0.9 * rng.uniform01(), 1});
        auto spec = make_spectrum_summary(a, lam);
        const double s = s_closed_graph(spec).s;
        CHECK(s >= d - 1e-12);
        CHECK(s <= d + m + 1e-12);
    }
}

TEST_CASE("s_closed_range worked values") {
    auto s1 = make_spectrum_summary({{1.0, 1}}, {{0.5, 1}, {0.8, 1}});
    auto r1 = s_closed_range(s1);
    CHECK(r1.s == doctest::Approx(1.625).epsilon(1e-14));
    CHECK(r1.branchIndex == 2);
    CHECK(r1.caseTag == SCase::interior);

    auto s2 = make_spectrum_summary({{1.0, 2}}, {{0.7, 1}});
    auto r2 = s_closed_range(s2);
    CHECK(r2.s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r2.caseTag == SCase::saturated);

    auto s3 = make_spectrum_summary({{1.0, 1}}, {{2.0 / 3.0, 1}});
    auto r3 = s_closed_range(s3);
    CHECK(r3.s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r3.caseTag == SCase::saturated);
}

TEST_CASE("s_closed_range never exceeds m") {
    CounterRng rng(37, 2);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 3);
        std::vector<SpectralLine> lam;
        for (int i = 0; i < m; ++i) lam.push_back({0.1 + 0.9 * rng.uniform01(), 1});
        auto spec = make_spectrum_summary({{0.5 + 3.0 * rng.uniform01(), 1}}, lam);
        CHECK(s_closed_range(spec).s <= m + 1e-12);
    }
}

TEST_CASE("numeric and closed-form exponents agree on random pairs") {
    CounterRng rng(41, 4);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_u64() % 2);
        const int m = 1 + static_cast<int>(rng.next_u64() % 2);
        auto pair = testutil::random_pair(rng, d, m, 0.5);
        auto spec = spectrum_summary(pair);
        const double x = std::pow(pair.c, spec.q);

        Matrix Wg = matrix_power_scale(direct_sum(pair.E, pair.D), pair.c);
        CHECK(std::abs(s_numeric(Wg, x).s - s_closed_graph(spec).s) <= 1e-4);

        Matrix Wr = matrix_power_scale(pair.D, pair.c);
        CHECK(std::abs(s_numeric(Wr, x).s - s_closed_range(spec).s) <= 1e-4);
    }
}

TEST_CASE("numeric exponent across a defective value block") {
    // D a Jordan block: lambda = (0.7, 0.7), q = 1 -> range s = 1/0.7
    ExponentPair p;
    p.E = Matrix::Constant(1, 1, 1.0);
    p.D = testutil::jordan_block2(0.7);
    p.c = 0.5;
    auto spec = spectrum_summary(p);
    auto closed = s_closed_range(spec);
    CHECK(closed.s == doctest::Approx(1.0 / 0.7).epsilon(1e-14));
    auto numeric = s_numeric(matrix_power_scale(p.D, p.c), std::pow(p.c, spec.q));
    CHECK(std::abs(numeric.s - closed.s) <= 1e-4);
}

TEST_CASE("numeric exponent is invariant in c") {
    CounterRng rng(41, 5);
    for (int trial = 0; trial < 3; ++trial) {
        auto pair = testutil::random_pair(rng, 2, 1);
        auto spec = spectrum_summary(pair);
        std::vector<double> values;
        for (double c : {0.1, 0.5, 0.9}) {
            Matrix W = matrix_power_scale(direct_sum(pair.E, pair.D), c);
            values.push_back(s_numeric(W, std::pow(c, spec.q)).s);
        }
        CHECK(std::abs(values[0] - values[1]) <= 1e-4);
        CHECK(std::abs(values[1] - values[2]) <= 1e-4);
        CHECK(std::abs(values[0] - values[2]) <= 1e-4);
    }
}
