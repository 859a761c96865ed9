#pragma once

#include "affdim/matrix.hpp"
#include "affdim/power_accum.hpp"
#include "affdim/spectrum.hpp"

namespace affdim {

// Singular value function of a contracting non-singular W at s in (0, n]:
// with descending singular values a_1 >= ... >= a_n this is
// a_1 ... a_{m-1} a_m^{s-m+1} where m-1 < s <= m.
double phi(const Matrix& W, double s);
double log_phi(const Matrix& W, double s);

// log phi evaluated on precomputed per-step log singular value rates
// (ascending); piecewise linear in s with kinks at the integers.
double log_phi_from_rates(const std::vector<double>& ratesAscending, double s);

// lim_k (1/k) log phi_{W^k}(r), estimated from doubling-k accumulation with
// extrapolation. Strictly decreasing in r.
double growth_rate(const Matrix& W, double r, const KSchedule& sched = {});

enum class SCase { interior, saturated };
enum class SMethod { closedForm, numeric };

// Affinity exponent s(W, x): the unique s with x^{-1} phi_{W^k}(s)^{1/k} -> 1,
// or s = n when no r in (0, n] drives x^{-k} phi_{W^k}(r) to zero.
struct SValResult {
    double s = 0.0;
    int branchIndex = 0;       // r of the graph form / ell of the range form
    SCase caseTag = SCase::interior;
    SMethod method = SMethod::closedForm;
    long kUsed = 0;            // numeric only
    double residual = 0.0;     // numeric only: rate(s) - log x
};

SValResult s_numeric(const Matrix& W, double x, double tol = 1e-6,
                     const KSchedule& sched = {});

// Closed form of s(c^{E+D}, c^q) over the merged exponent list gamma:
// with r the unique index such that sum_{j<r} gamma_j < q <= sum_{j<=r} gamma_j,
//   s = r - 1 + (q - sum_{j<r} gamma_j) / gamma_r.
// Free of c; always in [d, d+m].
SValResult s_closed_graph(const SpectrumSummary& spec);

// Closed form of s(c^D, c^q) over distinct lambda_i with multiplicities m_i:
//   s = (q + sum_{i<=ell} (lambda_ell - lambda_i) m_i) / lambda_ell
// when sum_{i<ell} lambda_i m_i < q <= sum_{i<=ell} lambda_i m_i, else s = m
// (saturated). Always <= m.
SValResult s_closed_range(const SpectrumSummary& spec);

}  // namespace affdim
