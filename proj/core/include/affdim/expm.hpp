#pragma once

#include "affdim/matrix.hpp"

namespace affdim {

// Matrix exponential by scaling-and-squaring with a degree-13 Pade core.
Matrix expm(const Matrix& A);

// c^E = exp(ln(c) * E) for a scale c in (0,1).
Matrix matrix_power_scale(const Matrix& E, double c);

// r^E for any r > 0 (used by generalized polar coordinates).
Matrix real_matrix_power(const Matrix& E, double r);

}  // namespace affdim
