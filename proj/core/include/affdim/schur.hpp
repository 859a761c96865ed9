#pragma once

#include <vector>

#include "affdim/matrix.hpp"
#include "affdim/spectrum.hpp"

namespace affdim {

// Real Schur form M = Q T Q^T with 2x2 blocks in LAPACK standard form.
struct RealSchurForm {
    Matrix T;
    Matrix Q;
    std::vector<int> blockStart;   // first row of each 1x1/2x2 diagonal block
    std::vector<int> blockSize;    // 1 or 2
    std::vector<double> blockRe;   // eigenvalue real part of each block
};

RealSchurForm real_schur(const Matrix& M);

// Schur form with diagonal blocks reordered so clustered eigenvalue real
// parts appear in ascending runs (LAPACK dtrexc swaps).
RealSchurForm ordered_real_schur(const Matrix& M, double clusterTol = -1.0);

// Invariant subspace for one clustered eigenvalue real part.
struct SpectralBlock {
    Matrix basis;       // m x dimension, columns span the subspace
    Matrix blockMatrix; // dimension x dimension, the restriction of D
    double realPart = 0.0;
    int dimension = 0;
};

// D = changeOfBasis * blockdiag(blockMatrix_i) * changeOfBasis^-1 with
// blocks ascending in clustered real part.
struct SpectralDecomposition {
    std::vector<SpectralBlock> blocks;
    Matrix changeOfBasis;

    Matrix blockDiagonal() const;
    Matrix reconstruct() const;
};

SpectralDecomposition spectral_decomposition(const Matrix& D, double clusterTol = -1.0);

}  // namespace affdim
