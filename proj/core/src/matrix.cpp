#include "affdim/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <sstream>

namespace affdim {

void require_square_finite(const Matrix& M, const char* name) {
    if (M.rows() == 0 || M.rows() != M.cols())
        throw DomainError(std::string(name) + ": matrix must be square and non-empty");
    if (!M.allFinite())
        throw DomainError(std::string(name) + ": matrix has non-finite entries");
}

Matrix read_matrix(std::istream& in, const std::string& origin) {
    int n = 0;
    if (!(in >> n) || n <= 0)
        throw DomainError(origin + ": expected positive matrix order on first line");
    Matrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(in >> M(i, j)))
                throw DomainError(origin + ": short read at entry (" + std::to_string(i) +
                                  "," + std::to_string(j) + ")");
    require_square_finite(M, origin.c_str());
    return M;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open matrix file: " + path);
    return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const Matrix& M) {
    out << M.rows() << "\n";
    char buf[32];
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
            out << (j ? " " : "") << buf;
        }
        out << "\n";
    }
}

void write_matrix_file(const std::string& path, const Matrix& M) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open matrix file for writing: " + path);
    write_matrix(out, M);
}

Matrix direct_sum(const Matrix& A, const Matrix& B) {
    Matrix W = Matrix::Zero(A.rows() + B.rows(), A.cols() + B.cols());
    W.topLeftCorner(A.rows(), A.cols()) = A;
    W.bottomRightCorner(B.rows(), B.cols()) = B;
    return W;
}

Vector singular_values(const Matrix& M) {
    require_square_finite(M, "singular_values");
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues();
}

bool is_contracting(const Matrix& M) {
    return singular_values(M)(0) < 1.0;
}

double spectral_radius(const Matrix& M) {
    require_square_finite(M, "spectral_radius");
    Eigen::EigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NumericError("spectral_radius: eigensolver failed");
    double r = 0.0;
    for (Eigen::Index i = 0; i < M.rows(); ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
    return r;
}

}  // namespace affdim
