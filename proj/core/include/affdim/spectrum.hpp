#pragma once

#include <vector>

#include "affdim/matrix.hpp"

namespace affdim {

// One clustered eigenvalue real part with its total multiplicity.
struct SpectralLine {
    double realPart = 0.0;
    int multiplicity = 0;
};

// Scaling exponents (E, D) and the scale c defining U = c^E, V = c^D.
// Valid pairs have every eigenvalue real part of E and D strictly positive,
// so that both powers are contracting for any c in (0,1).
struct ExponentPair {
    Matrix E;
    Matrix D;
    double c = 0.5;

    int d() const { return static_cast<int>(E.rows()); }
    int m() const { return static_cast<int>(D.rows()); }
    void validate() const;  // throws DomainError
};

// Eigenvalue real parts of E and D, clustered and sorted ascending, the
// merged multiplicity-expanded list gamma, and q = trace(E).
struct SpectrumSummary {
    std::vector<SpectralLine> a;       // from E, ascending
    std::vector<SpectralLine> lambda;  // from D, ascending
    std::vector<double> gamma;         // expanded union, ascending, size d+m
    double q = 0.0;                    // trace(E)
    int d = 0;
    int m = 0;

    std::vector<double> expandedA() const;
    std::vector<double> expandedLambda() const;
};

double default_cluster_tol(const Matrix& M);

// Sorted eigenvalue real parts (unclustered), via the real Schur form.
std::vector<double> eigenvalue_real_parts(const Matrix& M);

// Clusters sorted real parts: consecutive values closer than clusterTol are
// merged into one line whose real part is the cluster mean. Multiplicities
// sum to the order of M. clusterTol <= 0 selects the default tolerance.
std::vector<SpectralLine> eig_real_spectrum(const Matrix& M, double clusterTol = -1.0);

SpectrumSummary spectrum_summary(const ExponentPair& pair, double clusterTol = -1.0);

// Builds a summary directly from spectral data (inline spectra input path).
// aParts/lambdaParts are (realPart, multiplicity) pairs; q = sum(a_i * mu_i).
SpectrumSummary make_spectrum_summary(std::vector<SpectralLine> aParts,
                                      std::vector<SpectralLine> lambdaParts);

}  // namespace affdim
