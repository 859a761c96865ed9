#include "affdim/polar.hpp"

#include <cmath>

#include "affdim/expm.hpp"
#include "affdim/schur.hpp"

namespace affdim {

GeneralizedPolar::GeneralizedPolar(const Matrix& E) : E_(E) {
    require_square_finite(E, "polar_coordinates");
    RealSchurForm s = real_schur(E);
    const int n = static_cast<int>(E.rows());

    minRe_ = s.blockRe[0];
    for (double re : s.blockRe) minRe_ = std::min(minRe_, re);
    if (!(minRe_ > 0.0))
        throw DomainError("polar_coordinates: eigenvalue real parts of E must be positive");

    // Balance 2x2 rotation blocks to skew form so their symmetric part is a
    // multiple of the identity.
    Vector scale = Vector::Ones(n);
    for (size_t k = 0; k < s.blockStart.size(); ++k) {
        if (s.blockSize[k] != 2) continue;
        const int i = s.blockStart[k];
        const double b = s.T(i, i + 1), c = s.T(i + 1, i);
        if (b != 0.0 && c != 0.0) scale(i + 1) = std::sqrt(std::abs(c / b));
    }
    Matrix T = scale.cwiseInverse().asDiagonal() * s.T * scale.asDiagonal();

    // Shrink inter-block couplings until the symmetric part stays positive
    // definite, which makes r -> |r^{-E} t| strictly monotone in this basis.
    double coupling = 0.0;
    for (size_t g = 0; g < s.blockStart.size(); ++g)
        for (size_t h = g + 1; h < s.blockStart.size(); ++h)
            coupling += T.block(s.blockStart[g], s.blockStart[h], s.blockSize[g], s.blockSize[h])
                            .squaredNorm();
    coupling = std::sqrt(coupling);
    double delta = 1.0;
    if (coupling > 0.25 * minRe_) delta = 0.25 * minRe_ / coupling;
    Vector groupScale(n);
    for (size_t k = 0; k < s.blockStart.size(); ++k)
        for (int r = 0; r < s.blockSize[k]; ++r)
            groupScale(s.blockStart[k] + r) = std::pow(delta, static_cast<double>(k));

    Vector w = scale.cwiseProduct(groupScale);
    adaptedE_ = w.cwiseInverse().asDiagonal() * s.T * w.asDiagonal();
    basisInv_ = w.cwiseInverse().asDiagonal() * s.Q.transpose();
}

double GeneralizedPolar::radius(const Vector& t) const {
    if (t.size() != E_.rows())
        throw DomainError("polar_coordinates: vector size does not match E");
    if (!t.allFinite() || t.norm() == 0.0)
        throw DomainError("polar_coordinates: t must be finite and non-zero");

    const Vector y = basisInv_ * t;
    auto g = [&](double u) { return (expm(-u * adaptedE_) * y).norm(); };

    // bracket the unique root of g(u) = 1 on the log-radius axis
    double lo = 0.0, hi = 0.0;
    const double uMax = 700.0 / minRe_;
    if (g(0.0) >= 1.0) {
        hi = 1.0;
        while (g(hi) >= 1.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > uMax) throw NumericError("polar_coordinates: bracket search failed");
        }
    } else {
        lo = -1.0;
        while (g(lo) < 1.0) {
            hi = lo;
            lo *= 2.0;
            if (lo < -uMax) throw NumericError("polar_coordinates: bracket search failed");
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= 1.0 ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

PolarCoordinates GeneralizedPolar::operator()(const Vector& t) const {
    PolarCoordinates pc;
    pc.radius = radius(t);
    pc.direction = expm(-std::log(pc.radius) * E_) * t;
    return pc;
}

PolarCoordinates polar_coordinates(const Matrix& E, const Vector& t) {
    return GeneralizedPolar(E)(t);
}

}  // namespace affdim
