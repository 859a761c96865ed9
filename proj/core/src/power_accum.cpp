#include "affdim/power_accum.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace affdim {

PowerAccumulator::PowerAccumulator(Matrix W) : W_(std::move(W)) {
    require_square_finite(W_, "log_singular_values_power");
    Vector sv = singular_values(W_);
    if (sv(sv.size() - 1) <= 0.0 ||
        sv(sv.size() - 1) < 1e-300 * sv(0))
        throw DomainError("log_singular_values_power: W is singular");
    Q_ = Matrix::Identity(W_.rows(), W_.cols());
    logDiag_ = Vector::Zero(W_.rows());
}

void PowerAccumulator::advance(long steps) {
    const Eigen::Index n = W_.rows();
    for (long s = 0; s < steps; ++s) {
        Matrix A = W_ * Q_;
        Eigen::HouseholderQR<Matrix> qr(A);
        Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
        Q_ = qr.householderQ();
        for (Eigen::Index i = 0; i < n; ++i) {
            double rii = R(i, i);
            if (rii < 0.0) {
                Q_.col(i) = -Q_.col(i);
                rii = -rii;
            }
            if (!(rii > 0.0))
                throw NumericError("log_singular_values_power: breakdown (singular factor)");
            logDiag_(i) += std::log(rii);
        }
        ++k_;
    }
}

std::vector<double> PowerAccumulator::rates() const {
    std::vector<double> out(logDiag_.data(), logDiag_.data() + logDiag_.size());
    for (double& v : out) v /= static_cast<double>(k_);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> log_singular_values_power(const Matrix& W, long k) {
    if (k <= 0) throw DomainError("log_singular_values_power: k must be positive");
    PowerAccumulator acc(W);
    acc.advance(k);
    return acc.rates();
}

namespace {

// Fit eta(k) = eta_inf + (A + B log k)/k through three snapshots.
std::vector<double> extrapolate(const std::vector<std::vector<double>>& snaps,
                                const std::vector<long>& ks) {
    const size_t j = snaps.size();
    const size_t n = snaps[0].size();
    Eigen::Matrix3d M;
    for (int r = 0; r < 3; ++r) {
        const double k = static_cast<double>(ks[j - 3 + static_cast<size_t>(r)]);
        M(r, 0) = 1.0;
        M(r, 1) = 1.0 / k;
        M(r, 2) = std::log(k) / k;
    }
    Eigen::PartialPivLU<Eigen::Matrix3d> lu(M);
    std::vector<double> eta(n);
    for (size_t i = 0; i < n; ++i) {
        Eigen::Vector3d y(snaps[j - 3][i], snaps[j - 2][i], snaps[j - 1][i]);
        eta[i] = lu.solve(y)(0);
    }
    std::sort(eta.begin(), eta.end());
    return eta;
}

}  // namespace

RateLimit log_singular_rate_limit(const Matrix& W, const KSchedule& sched) {
    PowerAccumulator acc(W);
    const size_t n = static_cast<size_t>(W.rows());
    std::vector<std::vector<double>> snaps;
    std::vector<long> ks;
    RateLimit out;
    out.logAbsDet = std::log(std::abs(W.determinant()));

    // Snapshot at K is the mean of the sorted rate vectors over steps in
    // (K/2, K]. Rotation blocks make the raw per-k rates oscillate with the
    // rotation phase; the window average washes the phase out so the smooth
    // extrapolation model applies.
    std::vector<double> windowSum(n, 0.0);
    long windowCount = 0;
    long K = sched.k0;
    while (acc.k() < sched.kMax && K <= sched.kMax) {
        acc.advance(1);
        const long k = acc.k();
        if (2 * k > K) {
            std::vector<double> r = acc.rates();
            for (size_t i = 0; i < n; ++i) windowSum[i] += r[i];
            ++windowCount;
        }
        if (k < K) continue;

        std::vector<double> snap(n);
        for (size_t i = 0; i < n; ++i) snap[i] = windowSum[i] / static_cast<double>(windowCount);
        std::fill(windowSum.begin(), windowSum.end(), 0.0);
        windowCount = 0;
        snaps.push_back(std::move(snap));
        ks.push_back(K);
        K *= 2;
        if (snaps.size() < 3) continue;

        std::vector<double> eta = extrapolate(snaps, ks);
        if (!out.eta.empty()) {
            double delta = 0.0;
            for (size_t i = 0; i < eta.size(); ++i)
                delta = std::max(delta, std::abs(eta[i] - out.eta[i]));
            out.lastDelta = delta;
            out.converged = delta < sched.tol;
        }
        out.etaPrev = std::move(out.eta);
        out.eta = std::move(eta);
        out.kUsed = ks.back();
        if (out.converged) return out;
    }
    if (out.eta.empty()) {
        // schedule shorter than three snapshots: fall back to the raw rates
        out.eta = acc.rates();
        out.kUsed = acc.k();
        out.converged = false;
    }
    return out;
}

}  // namespace affdim
