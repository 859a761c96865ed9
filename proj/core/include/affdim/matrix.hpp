#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "affdim/errors.hpp"

namespace affdim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Throws DomainError unless M is square, non-empty and all entries are finite.
void require_square_finite(const Matrix& M, const char* name);

// Plain-text matrix format: first line is the order n, then n lines of n
// space-separated entries.
Matrix read_matrix(std::istream& in, const std::string& origin = "<stream>");
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& M);
void write_matrix_file(const std::string& path, const Matrix& M);

// Block-diagonal direct sum, e.g. the joint scaling operator of a graph.
Matrix direct_sum(const Matrix& A, const Matrix& B);

// Singular values in descending order.
Vector singular_values(const Matrix& M);

// Largest singular value strictly below one.
bool is_contracting(const Matrix& M);

// Largest eigenvalue modulus.
double spectral_radius(const Matrix& M);

}  // namespace affdim
