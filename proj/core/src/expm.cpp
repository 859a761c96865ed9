#include "affdim/expm.hpp"

#include <cmath>

namespace affdim {

namespace {

// Pade coefficients for the degree-13 approximant (Higham 2005).
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

constexpr double kTheta13 = 5.371920351148152;

}  // namespace

Matrix expm(const Matrix& A) {
    require_square_finite(A, "expm");
    const Eigen::Index n = A.rows();
    const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();

    int squarings = 0;
    if (norm1 > kTheta13)
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    const Matrix As = A / std::ldexp(1.0, squarings);

    const Matrix I = Matrix::Identity(n, n);
    const Matrix A2 = As * As;
    const Matrix A4 = A2 * A2;
    const Matrix A6 = A2 * A4;
    const auto& b = kPade13;

    Matrix U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) +
                     b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
    Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) +
               b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;

    Matrix R = (V - U).partialPivLu().solve(V + U);
    for (int i = 0; i < squarings; ++i) R = R * R;
    return R;
}

Matrix matrix_power_scale(const Matrix& E, double c) {
    require_square_finite(E, "matrix_power_scale");
    if (!(c > 0.0 && c < 1.0))
        throw DomainError("matrix_power_scale: scale c must lie in (0,1)");
    return expm(std::log(c) * E);
}

Matrix real_matrix_power(const Matrix& E, double r) {
    require_square_finite(E, "real_matrix_power");
    if (!(r > 0.0) || !std::isfinite(r))
        throw DomainError("real_matrix_power: exponent base must be positive and finite");
    return expm(std::log(r) * E);
}

}  // namespace affdim
