#pragma once

#include <vector>

#include "affdim/matrix.hpp"

namespace affdim {

// Accumulates per-step log singular values of W^k without ever forming W^k:
// the product is carried as an orthogonal factor that is re-factorized (QR)
// at every step, so exponents far below the underflow threshold stay exact
// in the log domain. Cost is O(k n^3).
class PowerAccumulator {
public:
    explicit PowerAccumulator(Matrix W);  // throws DomainError if W is singular

    void advance(long steps);
    long k() const { return k_; }

    // (1/k) log sigma_i(W^k) estimates, ascending.
    std::vector<double> rates() const;

private:
    Matrix W_;
    Matrix Q_;
    Vector logDiag_;
    long k_ = 0;
};

std::vector<double> log_singular_values_power(const Matrix& W, long k);

// Extrapolated k -> infinity limit of the rates, fitted from doubling-k
// snapshots with the model eta(k) = eta + (A + B log k) / k. The log term
// absorbs the polynomial factors of non-diagonalizable W.
struct RateLimit {
    std::vector<double> eta;      // ascending limits of (1/k) log sigma_i(W^k)
    std::vector<double> etaPrev;  // previous extrapolation (diagnostics)
    long kUsed = 0;
    double lastDelta = 0.0;       // change between the final two extrapolations
    double logAbsDet = 0.0;       // exact value of sum(eta) = log |det W|
    bool converged = false;
};

// Doubling-k schedule with adaptive stop. Most inputs converge by k ~ 2048;
// skew-conjugated rotation ties decay like log(k)/k and can need much more,
// hence the high ceiling.
struct KSchedule {
    long k0 = 64;
    long kMax = 131072;
    double tol = 3e-6;  // convergence of successive extrapolated estimates
};

RateLimit log_singular_rate_limit(const Matrix& W, const KSchedule& sched = {});

}  // namespace affdim
