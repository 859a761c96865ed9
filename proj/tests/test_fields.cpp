#include <cmath>
#include <cstdio>

#include "affdim/fields.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace affdim;

namespace {

std::vector<std::vector<double>> even_probes(int n, std::initializer_list<int> js) {
    std::vector<std::vector<double>> out;
    for (int j : js) out.push_back({static_cast<double>(j) / n});
    return out;
}

}  // namespace

TEST_CASE("simulate_ofbm determinism and basic contract") {
    auto a = simulate_ofbm(OfbmSpec::scalarHurst(0.6), 256, 3, 42);
    auto b = simulate_ofbm(OfbmSpec::scalarHurst(0.6), 256, 3, 42);
    REQUIRE(a.size() == 3);
    for (size_t r = 0; r < a.size(); ++r) {
        CHECK(a[r].values == b[r].values);  // bitwise
        CHECK(a[r].value(0)[0] == 0.0);     // X(0) = 0 exactly
        a[r].validate();
    }
    CHECK(a[0].values != a[1].values);

    // worker count must not change the bytes
    auto c = simulate_ofbm(OfbmSpec::scalarHurst(0.6), 256, 3, 42, 3);
    for (size_t r = 0; r < a.size(); ++r) CHECK(a[r].values == c[r].values);
}

TEST_CASE("simulate_ofbm rejects unsupported models") {
    CHECK_THROWS_AS(simulate_ofbm(OfbmSpec::scalarHurst(1.2), 64, 1, 1), DomainError);
    CHECK_THROWS_AS(simulate_ofbm(OfbmSpec::scalarHurst(0.5), 100, 1, 1), DomainError);
    OfbmSpec rot;
    rot.D = testutil::rotation_block(0.5, 0.2);
    CHECK_THROWS_AS(simulate_ofbm(rot, 64, 1, 1), DomainError);
    OfbmSpec jordan;
    jordan.D = testutil::jordan_block2(0.5);
    CHECK_THROWS_AS(simulate_ofbm(jordan, 64, 1, 1), DomainError);
}

TEST_CASE("fBm variance normalization Var X(1) = 1") {
    const long R = 10000;
    auto paths = simulate_ofbm(OfbmSpec::scalarHurst(0.5), 256, R, 7);
    double sum = 0.0, sum2 = 0.0;
    for (const auto& p : paths) {
        const double x = p.value(p.pointCount() - 1)[0];
        sum += x;
        sum2 += x * x;
    }
    const double var = sum2 / R - (sum / R) * (sum / R);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("fBm self-similarity: variance growth exponent 2H") {
    const double H = 0.7;
    const long R = 10000;
    const int n = 64;
    auto paths = simulate_ofbm(OfbmSpec::scalarHurst(H), n, R, 11);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int j = 4; j < n; j += 4) {
        double s2 = 0.0;
        for (const auto& p : paths) {
            const double x = p.value(j)[0];
            s2 += x * x;
        }
        const double lx = std::log(static_cast<double>(j) / n);
        const double ly = std::log(s2 / R);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++used;
    }
    const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
    CHECK(std::abs(slope - 2.0 * H) < 0.05);
}

TEST_CASE("fBm increments are stationary (KS at equal gaps)") {
    const long R = 2000;
    const int n = 256;
    auto paths = simulate_ofbm(OfbmSpec::scalarHurst(0.5), n, R, 13);
    const int gap = 32;
    std::vector<double> inc1, inc2;
    for (const auto& p : paths) {
        inc1.push_back(p.value(16 + gap)[0] - p.value(16)[0]);
        inc2.push_back(p.value(160 + gap)[0] - p.value(160)[0]);
    }
    const double ks = ks_statistic(inc1, inc2);
    CHECK(ks < ks_critical_value(R, R, 0.01));
}

TEST_CASE("ofbm with diagonalizable matrix exponent obeys the mixed scaling") {
    // D = P diag(0.4, 0.7) P^-1: in the eigenbasis the components are
    // independent scalar fields with Var Y_i(t) proportional to t^(2 h_i);
    // the component scale itself is a free normalization, so compare ratios.
    OfbmSpec spec;
    Matrix P(2, 2);
    P << 1.0, 1.0, 0.0, 1.0;
    Matrix H = Matrix::Zero(2, 2);
    H(0, 0) = 0.4;
    H(1, 1) = 0.7;
    spec.D = P * H * P.inverse();
    const long R = 8000;
    const int n = 128;
    auto paths = simulate_ofbm(spec, n, R, 17);
    Matrix Pinv = P.inverse();
    double v0a = 0, v0b = 0, v1a = 0, v1b = 0;
    for (const auto& p : paths) {
        Vector xa = Pinv * Eigen::Map<const Vector>(p.value(96), 2);  // t = 0.75
        Vector xb = Pinv * Eigen::Map<const Vector>(p.value(48), 2);  // t = 0.375
        v0a += xa(0) * xa(0);
        v0b += xb(0) * xb(0);
        v1a += xa(1) * xa(1);
        v1b += xb(1) * xb(1);
    }
    CHECK(std::abs(v0a / v0b - std::pow(2.0, 0.8)) < 0.15);
    CHECK(std::abs(v1a / v1b - std::pow(2.0, 1.4)) < 0.25);
}

TEST_CASE("simulate_stable_levy: Gaussian case and determinism") {
    const long R = 10000;
    auto paths = simulate_stable_levy({2.0}, 256, R, 23);
    double sum2 = 0.0;
    for (const auto& p : paths) {
        const double x = p.value(p.pointCount() - 1)[0];
        sum2 += x * x;
    }
    CHECK(std::abs(sum2 / R - 1.0) < 0.05);

    auto again = simulate_stable_levy({2.0}, 256, 3, 23);
    CHECK(again[1].values == paths[1].values);
    CHECK(paths[0].value(0)[0] == 0.0);
}

TEST_CASE("simulate_stable_levy: Cauchy quartiles at unit scale") {
    const long R = 100000;
    auto paths = simulate_stable_levy({1.0}, 128, R, 29);
    std::vector<double> x1;
    x1.reserve(R);
    for (const auto& p : paths) x1.push_back(p.value(p.pointCount() - 1)[0]);
    std::sort(x1.begin(), x1.end());
    const double med = x1[x1.size() / 2];
    const double q1 = x1[x1.size() / 4];
    const double q3 = x1[(3 * x1.size()) / 4];
    CHECK(std::abs(med) < 0.02);
    CHECK(std::abs((q3 - q1) - 2.0) < 0.05);
}

TEST_CASE("simulate_stable_levy rejects bad stability indices") {
    CHECK_THROWS_AS(simulate_stable_levy({2.5}, 64, 1, 1), DomainError);
    CHECK_THROWS_AS(simulate_stable_levy({0.0}, 64, 1, 1), DomainError);
}

TEST_CASE("verify_scaling passes on the true law and fails on a perturbed one") {
    const int n = 1024;
    const long R = 1000;
    auto paths = simulate_ofbm(OfbmSpec::scalarHurst(0.5), n, R, 31);
    auto probes = even_probes(n, {128, 256, 384, 512, 640, 768, 896});

    Matrix trueD = Matrix::Constant(1, 1, 0.5);
    auto rep = verify_scaling(paths, 0.5, trueD, probes);
    CHECK(rep.pass);
    CHECK(rep.maxKS < ks_critical_value(R / 2, R / 2, 0.01));  // below the plain 1% value

    auto repQuarter = verify_scaling(paths, 0.25, trueD, probes);
    CHECK(repQuarter.pass);

    // a wrong exponent separates fastest at a deep scale: the marginal scales
    // differ by the factor c^{-0.2}
    Matrix wrongD = Matrix::Constant(1, 1, 0.7);
    auto bad = verify_scaling(paths, 0.0625, wrongD, probes);
    CHECK_FALSE(bad.pass);
    CHECK(bad.maxKS > bad.threshold);
}

TEST_CASE("verify_scaling degenerate probe at the origin") {
    const int n = 256;
    auto paths = simulate_ofbm(OfbmSpec::scalarHurst(0.5), n, 400, 37);
    auto rep = verify_scaling(paths, 0.5, Matrix::Constant(1, 1, 0.5), {{0.0}});
    CHECK(rep.maxKS == 0.0);  // X(0) = 0 on both sides
}

TEST_CASE("verify_scaling input validation") {
    const int n = 256;
    auto paths = simulate_ofbm(OfbmSpec::scalarHurst(0.5), n, 400, 41);
    Matrix D = Matrix::Constant(1, 1, 0.5);
    // t on the lattice but ct off it
    CHECK_THROWS_AS(verify_scaling(paths, 0.5, D, {{3.0 / n}}), DomainError);
    // too few replicas
    auto small = simulate_ofbm(OfbmSpec::scalarHurst(0.5), n, 100, 41);
    CHECK_THROWS_AS(verify_scaling(small, 0.5, D, even_probes(n, {64})), DomainError);
}

TEST_CASE("path CSV round trip with metadata sidecar") {
    auto paths = simulate_stable_levy({1.5, 2.0}, 32, 1, 43);
    const std::string csv = "test_path_roundtrip.csv";
    const std::string meta = "test_path_roundtrip.meta";
    write_path_csv(csv, paths[0]);
    write_path_meta(meta, paths[0], 1);
    FieldPath back = read_path_csv(csv);
    CHECK(back.d == paths[0].d);
    CHECK(back.m == paths[0].m);
    CHECK(back.n == paths[0].n);
    CHECK(back.values == paths[0].values);  // 17 digits round-trip doubles exactly
    std::remove(csv.c_str());
    std::remove(meta.c_str());
}

TEST_CASE("2d spectral field: determinism, pinned origin, unit variance") {
    auto paths = simulate_ofbm(OfbmSpec::scalarHurst(0.6, 2), 32, 200, 47);
    CHECK(paths[0].value(0)[0] == 0.0);
    auto again = simulate_ofbm(OfbmSpec::scalarHurst(0.6, 2), 32, 1, 47);
    CHECK(again[0].values == paths[0].values);

    // normalization fixes Var X(e_1) = 1; check near the lattice edge
    const long idxE1 = paths[0].latticeIndex({1.0 - 1.0 / 32, 0.0});
    double s2 = 0.0;
    for (const auto& p : paths) s2 += p.value(idxE1)[0] * p.value(idxE1)[0];
    CHECK(std::abs(s2 / static_cast<double>(paths.size()) - 1.0) < 0.35);
}
