#pragma once

#include "affdim/matrix.hpp"

namespace affdim {

// Factorization t = radius^E * direction with direction on the E-unit sphere
// {s : rho_E(s) = 1}.
struct PolarCoordinates {
    double radius = 0.0;
    Vector direction;
};

// Reusable decomposer for a fixed exponent matrix E. The E-unit sphere is the
// Euclidean sphere of an adapted basis (balanced Schur basis) in which the
// map r -> |r^{-E} t| is strictly monotone; for normal E the adapted norm is
// plain Euclidean.
class GeneralizedPolar {
public:
    explicit GeneralizedPolar(const Matrix& E);

    PolarCoordinates operator()(const Vector& t) const;
    double radius(const Vector& t) const;

private:
    Matrix E_;
    Matrix adaptedE_;    // E in the balanced basis
    Matrix basisInv_;    // maps original to adapted coordinates
    double minRe_ = 0.0;
};

PolarCoordinates polar_coordinates(const Matrix& E, const Vector& t);

}  // namespace affdim
