#include "affdim/schur.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace affdim {

namespace {

void scan_blocks(RealSchurForm& s) {
    const int n = static_cast<int>(s.T.rows());
    s.blockStart.clear();
    s.blockSize.clear();
    s.blockRe.clear();
    int i = 0;
    while (i < n) {
        const bool pair = (i + 1 < n) && s.T(i + 1, i) != 0.0;
        s.blockStart.push_back(i);
        s.blockSize.push_back(pair ? 2 : 1);
        s.blockRe.push_back(s.T(i, i));  // standard form: equal diagonal in 2x2 blocks
        i += pair ? 2 : 1;
    }
}

// Cluster intervals [lo, hi] over a sorted list; consecutive values within
// tol belong to the same cluster.
struct ClusterBounds {
    std::vector<double> lo, hi, rep;
    int assign(double v, double tol) const {
        for (size_t k = 0; k < lo.size(); ++k)
            if (v >= lo[k] - 0.5 * tol && v <= hi[k] + 0.5 * tol) return static_cast<int>(k);
        // fall back to nearest representative
        int best = 0;
        for (size_t k = 1; k < rep.size(); ++k)
            if (std::abs(v - rep[k]) < std::abs(v - rep[best])) best = static_cast<int>(k);
        return best;
    }
};

ClusterBounds cluster_bounds(std::vector<double> sorted, double tol) {
    ClusterBounds b;
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i + 1;
        double sum = sorted[i];
        while (j < sorted.size() && sorted[j] - sorted[j - 1] <= tol) sum += sorted[j++];
        b.lo.push_back(sorted[i]);
        b.hi.push_back(sorted[j - 1]);
        b.rep.push_back(sum / static_cast<double>(j - i));
        i = j;
    }
    return b;
}

}  // namespace

std::vector<double> eigenvalue_real_parts(const Matrix& M) {
    RealSchurForm s = real_schur(M);
    std::vector<double> re;
    for (size_t k = 0; k < s.blockStart.size(); ++k)
        re.insert(re.end(), s.blockSize[k], s.blockRe[k]);
    std::sort(re.begin(), re.end());
    return re;
}

RealSchurForm real_schur(const Matrix& M) {
    require_square_finite(M, "real_schur");
    const lapack_int n = static_cast<lapack_int>(M.rows());
    RealSchurForm s;
    s.T = M;
    s.Q.resize(n, n);
    std::vector<double> wr(n), wi(n);
    lapack_int sdim = 0;
    lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n,
                                    s.T.data(), n, &sdim, wr.data(), wi.data(),
                                    s.Q.data(), n);
    if (info != 0)
        throw NumericError("real_schur: dgees failed with info=" + std::to_string(info));
    scan_blocks(s);
    return s;
}

RealSchurForm ordered_real_schur(const Matrix& M, double clusterTol) {
    if (clusterTol <= 0.0) clusterTol = default_cluster_tol(M);
    RealSchurForm s = real_schur(M);
    const lapack_int n = static_cast<lapack_int>(M.rows());

    ClusterBounds bounds = cluster_bounds(eigenvalue_real_parts(M), clusterTol);
    std::vector<int> cluster(s.blockStart.size());
    for (size_t k = 0; k < s.blockStart.size(); ++k)
        cluster[k] = bounds.assign(s.blockRe[k], clusterTol);

    // Stable selection sort on cluster id; dtrexc moves one diagonal block at
    // a time and shifts the ones in between.
    for (size_t target = 0; target < cluster.size(); ++target) {
        size_t best = target;
        for (size_t k = target + 1; k < cluster.size(); ++k)
            if (cluster[k] < cluster[best]) best = k;
        if (best == target) continue;

        // current row index of the blocks (recompute from sizes)
        scan_blocks(s);
        lapack_int ifst = static_cast<lapack_int>(s.blockStart[best]) + 1;
        lapack_int ilst = static_cast<lapack_int>(s.blockStart[target]) + 1;
        lapack_int info = LAPACKE_dtrexc(LAPACK_COL_MAJOR, 'V', n, s.T.data(), n,
                                         s.Q.data(), n, &ifst, &ilst);
        if (info != 0)
            throw NumericError(
                "ordered_real_schur: eigenvalue reordering failed (blocks too close); "
                "try a larger clusterTol");
        int c = cluster[best];
        cluster.erase(cluster.begin() + static_cast<long>(best));
        cluster.insert(cluster.begin() + static_cast<long>(target), c);
    }
    scan_blocks(s);
    return s;
}

namespace {

// Solves A X - X B = C by Kronecker vectorization (small blocks only).
Matrix solve_sylvester(const Matrix& A, const Matrix& B, const Matrix& C) {
    const Eigen::Index p = A.rows(), r = B.rows();
    // (I (x) A) - (B^T (x) I), column-major vectorization
    Matrix K = Matrix::Zero(p * r, p * r);
    for (Eigen::Index j = 0; j < r; ++j) K.block(j * p, j * p, p, p) = A;
    for (Eigen::Index j = 0; j < r; ++j)
        for (Eigen::Index i = 0; i < r; ++i)
            K.block(j * p, i * p, p, p) -= B(i, j) * Matrix::Identity(p, p);

    Vector c(p * r);
    for (Eigen::Index j = 0; j < r; ++j) c.segment(j * p, p) = C.col(j);
    Eigen::FullPivLU<Matrix> lu(K);
    if (!lu.isInvertible())
        throw NumericError(
            "spectral_decomposition: Sylvester system singular (clusters too close); "
            "try a larger clusterTol");
    Vector x = lu.solve(c);
    Matrix X(p, r);
    for (Eigen::Index j = 0; j < r; ++j) X.col(j) = x.segment(j * p, p);
    return X;
}

}  // namespace

Matrix SpectralDecomposition::blockDiagonal() const {
    int m = 0;
    for (const auto& b : blocks) m += b.dimension;
    Matrix BD = Matrix::Zero(m, m);
    int at = 0;
    for (const auto& b : blocks) {
        BD.block(at, at, b.dimension, b.dimension) = b.blockMatrix;
        at += b.dimension;
    }
    return BD;
}

Matrix SpectralDecomposition::reconstruct() const {
    return changeOfBasis * blockDiagonal() * changeOfBasis.inverse();
}

SpectralDecomposition spectral_decomposition(const Matrix& D, double clusterTol) {
    require_square_finite(D, "spectral_decomposition");
    if (clusterTol <= 0.0) clusterTol = default_cluster_tol(D);
    RealSchurForm s = ordered_real_schur(D, clusterTol);

    ClusterBounds bounds = cluster_bounds(eigenvalue_real_parts(D), clusterTol);
    // group adjacent blocks with the same cluster id
    std::vector<int> groupStart, groupDim;
    std::vector<double> groupRe;
    {
        int prev = -1;
        for (size_t k = 0; k < s.blockStart.size(); ++k) {
            int c = bounds.assign(s.blockRe[k], clusterTol);
            if (c != prev) {
                groupStart.push_back(s.blockStart[k]);
                groupDim.push_back(0);
                groupRe.push_back(bounds.rep[static_cast<size_t>(c)]);
                prev = c;
            }
            groupDim.back() += s.blockSize[k];
        }
    }
    const int G = static_cast<int>(groupStart.size());
    const int m = static_cast<int>(D.rows());

    // Decouple the quasi-triangular form into a block diagonal by solving
    // T_gg Z_gh - Z_gh T_hh = -(T_gh + sum_k T_gk Z_kh) over increasing spans.
    Matrix Z = Matrix::Identity(m, m);
    for (int span = 1; span < G; ++span) {
        for (int g = 0; g + span < G; ++g) {
            const int h = g + span;
            Matrix rhs = s.T.block(groupStart[g], groupStart[h], groupDim[g], groupDim[h]);
            for (int k = g + 1; k < h; ++k)
                rhs += s.T.block(groupStart[g], groupStart[k], groupDim[g], groupDim[k]) *
                       Z.block(groupStart[k], groupStart[h], groupDim[k], groupDim[h]);
            Matrix X = solve_sylvester(
                s.T.block(groupStart[g], groupStart[g], groupDim[g], groupDim[g]),
                s.T.block(groupStart[h], groupStart[h], groupDim[h], groupDim[h]), -rhs);
            Z.block(groupStart[g], groupStart[h], groupDim[g], groupDim[h]) = X;
        }
    }

    SpectralDecomposition out;
    out.changeOfBasis = s.Q * Z;
    for (int g = 0; g < G; ++g) {
        SpectralBlock b;
        b.dimension = groupDim[g];
        b.realPart = groupRe[static_cast<size_t>(g)];
        b.blockMatrix = s.T.block(groupStart[g], groupStart[g], groupDim[g], groupDim[g]);
        b.basis = out.changeOfBasis.middleCols(groupStart[g], groupDim[g]);
        out.blocks.push_back(std::move(b));
    }
    return out;
}

}  // namespace affdim
