#include "affdim/svf.hpp"

#include <algorithm>
#include <cmath>

namespace affdim {

namespace {

// The single-matrix singular value function wants all singular values in
// (0,1); the matrix-power limit only needs the spectral radius below one.
void require_sv_contracting_nonsingular(const Matrix& W, const char* name) {
    Vector sv = singular_values(W);
    if (!(sv(0) < 1.0))
        throw DomainError(std::string(name) + ": W must be contracting (largest singular value " +
                          std::to_string(sv(0)) + " >= 1)");
    if (!(sv(sv.size() - 1) > 0.0))
        throw DomainError(std::string(name) + ": W must be non-singular");
}

void require_spectrally_contracting_nonsingular(const Matrix& W, const char* name) {
    const double rho = spectral_radius(W);
    if (!(rho < 1.0))
        throw DomainError(std::string(name) + ": W must be contracting (spectral radius " +
                          std::to_string(rho) + " >= 1)");
    Vector sv = singular_values(W);
    if (!(sv(sv.size() - 1) > 0.0))
        throw DomainError(std::string(name) + ": W must be non-singular");
}

void require_s_range(double s, Eigen::Index n, const char* name) {
    if (!(s > 0.0 && s <= static_cast<double>(n)))
        throw DomainError(std::string(name) + ": s must lie in (0, n], got s=" +
                          std::to_string(s));
}

}  // namespace

double log_phi(const Matrix& W, double s) {
    require_sv_contracting_nonsingular(W, "phi");
    require_s_range(s, W.rows(), "phi");
    Vector sv = singular_values(W);  // descending
    const int m = static_cast<int>(std::ceil(s));
    double lp = 0.0;
    for (int i = 0; i < m - 1; ++i) lp += std::log(sv(i));
    lp += (s - m + 1) * std::log(sv(m - 1));
    return lp;
}

double phi(const Matrix& W, double s) { return std::exp(log_phi(W, s)); }

double log_phi_from_rates(const std::vector<double>& ratesAscending, double s) {
    const int n = static_cast<int>(ratesAscending.size());
    require_s_range(s, n, "log_phi_from_rates");
    const int m = static_cast<int>(std::ceil(s));
    double lp = 0.0;
    for (int i = 0; i < m - 1; ++i) lp += ratesAscending[static_cast<size_t>(n - 1 - i)];
    lp += (s - m + 1) * ratesAscending[static_cast<size_t>(n - m)];
    return lp;
}

double growth_rate(const Matrix& W, double r, const KSchedule& sched) {
    require_spectrally_contracting_nonsingular(W, "growth_rate");
    require_s_range(r, W.rows(), "growth_rate");
    RateLimit lim = log_singular_rate_limit(W, sched);
    if (!lim.converged) {
        const double last = log_phi_from_rates(lim.eta, r);
        const double prev = lim.etaPrev.empty() ? last : log_phi_from_rates(lim.etaPrev, r);
        throw NumericError("growth_rate: no convergence by k=" + std::to_string(sched.kMax) +
                           "; last two estimates " + std::to_string(prev) + ", " +
                           std::to_string(last));
    }
    return log_phi_from_rates(lim.eta, r);
}

SValResult s_numeric(const Matrix& W, double x, double tol, const KSchedule& sched) {
    if (!(x > 0.0 && x < 1.0))
        throw DomainError("s_numeric: x must lie in (0,1)");
    require_spectrally_contracting_nonsingular(W, "s_numeric");
    const int n = static_cast<int>(W.rows());
    const double logx = std::log(x);

    RateLimit lim = log_singular_rate_limit(W, sched);
    if (!lim.converged)
        throw NumericError("s_numeric: growth rate did not converge by k=" +
                           std::to_string(sched.kMax));

    SValResult res;
    res.method = SMethod::numeric;
    res.kUsed = lim.kUsed;

    // rate(n) equals log|det W| for every k; the saturated branch is decided
    // exactly (the inf-of-empty-set convention).
    if (lim.logAbsDet >= logx - 1e-12) {
        res.s = static_cast<double>(n);
        res.branchIndex = n;
        res.caseTag = SCase::saturated;
        res.residual = lim.logAbsDet - logx;
        return res;
    }

    // The rate is strictly decreasing and piecewise linear in s; bisect.
    double lo = 1e-12, hi = static_cast<double>(n);
    for (int it = 0; it < 200 && hi - lo > std::min(tol, 1e-12); ++it) {
        const double mid = 0.5 * (lo + hi);
        (log_phi_from_rates(lim.eta, mid) > logx ? lo : hi) = mid;
    }
    res.s = 0.5 * (lo + hi);
    res.branchIndex = static_cast<int>(std::ceil(res.s));
    res.caseTag = SCase::interior;
    res.residual = log_phi_from_rates(lim.eta, res.s) - logx;
    return res;
}

SValResult s_closed_graph(const SpectrumSummary& spec) {
    const auto& g = spec.gamma;
    if (g.empty()) throw DomainError("s_closed_graph: empty spectrum");
    const double q = spec.q;
    const double tieTol = 1e-12 * (1.0 + std::abs(q));
    double cumBefore = 0.0;
    for (size_t r = 0; r < g.size(); ++r) {
        if (q <= cumBefore + g[r] + tieTol) {
            SValResult res;
            res.s = static_cast<double>(r) + (q - cumBefore) / g[r];
            res.branchIndex = static_cast<int>(r) + 1;
            res.caseTag = SCase::interior;
            res.method = SMethod::closedForm;
            return res;
        }
        cumBefore += g[r];
    }
    // q = trace(E) is part of the gamma total, so this is unreachable for a
    // well-formed summary.
    throw DomainError("s_closed_graph: q exceeds the total of gamma (malformed spectrum)");
}

SValResult s_closed_range(const SpectrumSummary& spec) {
    const auto& lam = spec.lambda;
    if (lam.empty()) throw DomainError("s_closed_range: empty spectrum");
    const double q = spec.q;
    const double tieTol = 1e-12 * (1.0 + std::abs(q));
    double cumBefore = 0.0;
    for (size_t l = 0; l < lam.size(); ++l) {
        const double step = lam[l].realPart * lam[l].multiplicity;
        if (q <= cumBefore + step + tieTol) {
            double sum = q;
            for (size_t i = 0; i <= l; ++i)
                sum += (lam[l].realPart - lam[i].realPart) * lam[i].multiplicity;
            SValResult res;
            res.s = sum / lam[l].realPart;
            res.branchIndex = static_cast<int>(l) + 1;
            res.caseTag = SCase::interior;
            res.method = SMethod::closedForm;
            return res;
        }
        cumBefore += step;
    }
    SValResult res;
    res.s = static_cast<double>(spec.m);
    res.branchIndex = static_cast<int>(lam.size());
    res.caseTag = SCase::saturated;
    res.method = SMethod::closedForm;
    return res;
}

}  // namespace affdim
