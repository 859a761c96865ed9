#pragma once

#include <cmath>
#include <vector>

#include "affdim/matrix.hpp"
#include "affdim/rng.hpp"
#include "affdim/spectrum.hpp"

namespace testutil {

using affdim::CounterRng;
using affdim::Matrix;
using affdim::Vector;

inline Matrix random_orthogonal(int n, CounterRng& rng) {
    Matrix G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = rng.gaussian();
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ();
    Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
        if (R(i, i) < 0) Q.col(i) = -Q.col(i);
    return Q;
}

// Random matrix with prescribed eigenvalue real parts: P * blockdiag * P^-1,
// where the blocks are 1x1 reals or 2x2 rotation pairs and cond(P) <= condCap.
struct EigenSpec {
    double realPart;
    double imagPart;  // 0 for a real eigenvalue, else a conjugate pair
};

inline Matrix matrix_with_spectrum(const std::vector<EigenSpec>& spec, CounterRng& rng,
                                   double condCap = 10.0) {
    int n = 0;
    for (const auto& e : spec) n += (e.imagPart == 0.0) ? 1 : 2;
    Matrix B = Matrix::Zero(n, n);
    int at = 0;
    for (const auto& e : spec) {
        if (e.imagPart == 0.0) {
            B(at, at) = e.realPart;
            at += 1;
        } else {
            B(at, at) = e.realPart;
            B(at, at + 1) = -e.imagPart;
            B(at + 1, at) = e.imagPart;
            B(at + 1, at + 1) = e.realPart;
            at += 2;
        }
    }
    const Matrix Q1 = random_orthogonal(n, rng);
    const Matrix Q2 = random_orthogonal(n, rng);
    Vector d(n);
    const double s = std::sqrt(condCap);
    for (int i = 0; i < n; ++i) d(i) = 1.0 / s + (s - 1.0 / s) * rng.uniform01();
    const Matrix P = Q1 * d.asDiagonal() * Q2.transpose();
    return P * B * P.inverse();
}

// random exponent pair with positive real parts; may include a Jordan block
inline affdim::ExponentPair random_pair(CounterRng& rng, int d, int m, double c = 0.5) {
    using affdim::ExponentPair;
    std::vector<EigenSpec> se, sd;
    int i = 0;
    while (i < d) {
        if (d - i >= 2 && rng.uniform01() < 0.3) {
            se.push_back({0.8 + 2.0 * rng.uniform01(), 0.2 + rng.uniform01()});
            i += 2;
        } else {
            se.push_back({0.8 + 2.0 * rng.uniform01(), 0.0});
            i += 1;
        }
    }
    i = 0;
    while (i < m) {
        if (m - i >= 2 && rng.uniform01() < 0.3) {
            sd.push_back({0.3 + 0.6 * rng.uniform01(), 0.1 + 0.5 * rng.uniform01()});
            i += 2;
        } else {
            sd.push_back({0.3 + 0.6 * rng.uniform01(), 0.0});
            i += 1;
        }
    }
    ExponentPair p;
    p.E = matrix_with_spectrum(se, rng);
    p.D = matrix_with_spectrum(sd, rng);
    p.c = c;
    return p;
}

// random non-singular matrix rescaled so the largest singular value hits a
// prescribed level below one
inline Matrix random_sv_contraction(int n, CounterRng& rng, double topSv = 0.8) {
    for (;;) {
        Matrix G(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) G(i, j) = rng.gaussian();
        Eigen::JacobiSVD<Matrix> svd(G);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(n - 1);
        if (smin > 1e-3 * smax) return (topSv / smax) * G;
    }
}

inline Matrix jordan_block2(double lambda) {
    Matrix J(2, 2);
    J << lambda, 1.0, 0.0, lambda;
    return J;
}

inline Matrix rotation_block(double re, double im) {
    Matrix R(2, 2);
    R << re, -im, im, re;
    return R;
}

}  // namespace testutil
