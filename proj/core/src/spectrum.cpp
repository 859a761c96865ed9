#include "affdim/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "affdim/schur.hpp"

namespace affdim {

double default_cluster_tol(const Matrix& M) {
    return 1e-9 * (1.0 + M.norm());
}

namespace {

std::vector<SpectralLine> cluster_sorted(const std::vector<double>& sorted, double tol) {
    std::vector<SpectralLine> out;
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i + 1;
        double sum = sorted[i];
        while (j < sorted.size() && sorted[j] - sorted[j - 1] <= tol) {
            sum += sorted[j];
            ++j;
        }
        out.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
        i = j;
    }
    return out;
}

void require_positive(const std::vector<SpectralLine>& lines, const char* name) {
    for (const auto& l : lines)
        if (!(l.realPart > 0.0))
            throw DomainError(std::string(name) +
                              ": eigenvalue real parts must be strictly positive, got " +
                              std::to_string(l.realPart));
}

std::vector<double> expand(const std::vector<SpectralLine>& lines) {
    std::vector<double> out;
    for (const auto& l : lines) out.insert(out.end(), l.multiplicity, l.realPart);
    return out;
}

}  // namespace

void ExponentPair::validate() const {
    require_square_finite(E, "ExponentPair.E");
    require_square_finite(D, "ExponentPair.D");
    if (!(c > 0.0 && c < 1.0))
        throw DomainError("ExponentPair: scale c must lie in (0,1)");
    require_positive(eig_real_spectrum(E), "ExponentPair.E");
    require_positive(eig_real_spectrum(D), "ExponentPair.D");
}

std::vector<double> SpectrumSummary::expandedA() const { return expand(a); }
std::vector<double> SpectrumSummary::expandedLambda() const { return expand(lambda); }

std::vector<SpectralLine> eig_real_spectrum(const Matrix& M, double clusterTol) {
    require_square_finite(M, "eig_real_spectrum");
    if (clusterTol <= 0.0) clusterTol = default_cluster_tol(M);
    std::vector<double> re = eigenvalue_real_parts(M);  // sorted
    return cluster_sorted(re, clusterTol);
}

SpectrumSummary spectrum_summary(const ExponentPair& pair, double clusterTol) {
    pair.validate();
    SpectrumSummary s;
    s.a = eig_real_spectrum(pair.E, clusterTol);
    s.lambda = eig_real_spectrum(pair.D, clusterTol);
    require_positive(s.a, "spectrum_summary: E");
    require_positive(s.lambda, "spectrum_summary: D");
    s.d = pair.d();
    s.m = pair.m();
    s.q = pair.E.trace();
    s.gamma = expand(s.a);
    std::vector<double> lam = expand(s.lambda);
    s.gamma.insert(s.gamma.end(), lam.begin(), lam.end());
    std::sort(s.gamma.begin(), s.gamma.end());
    return s;
}

SpectrumSummary make_spectrum_summary(std::vector<SpectralLine> aParts,
                                      std::vector<SpectralLine> lambdaParts) {
    if (aParts.empty() || lambdaParts.empty())
        throw DomainError("make_spectrum_summary: both spectra must be non-empty");
    auto byRe = [](const SpectralLine& x, const SpectralLine& y) {
        return x.realPart < y.realPart;
    };
    std::sort(aParts.begin(), aParts.end(), byRe);
    std::sort(lambdaParts.begin(), lambdaParts.end(), byRe);
    require_positive(aParts, "make_spectrum_summary: a");
    require_positive(lambdaParts, "make_spectrum_summary: lambda");
    for (const auto& l : aParts)
        if (l.multiplicity <= 0) throw DomainError("make_spectrum_summary: multiplicities must be positive");
    for (const auto& l : lambdaParts)
        if (l.multiplicity <= 0) throw DomainError("make_spectrum_summary: multiplicities must be positive");

    SpectrumSummary s;
    s.a = std::move(aParts);
    s.lambda = std::move(lambdaParts);
    s.d = 0;
    s.m = 0;
    s.q = 0.0;
    for (const auto& l : s.a) {
        s.d += l.multiplicity;
        s.q += l.realPart * l.multiplicity;
    }
    for (const auto& l : s.lambda) s.m += l.multiplicity;
    s.gamma = expand(s.a);
    std::vector<double> lam = expand(s.lambda);
    s.gamma.insert(s.gamma.end(), lam.begin(), lam.end());
    std::sort(s.gamma.begin(), s.gamma.end());
    return s;
}

}  // namespace affdim
