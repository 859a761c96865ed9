#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affdim/matrix.hpp"

namespace affdim {

enum class FieldModel { ofbm, stableLevy };

std::string field_model_name(FieldModel m);

// One simulated sample path on the regular lattice t_j = j/n per axis of
// [0,1)^d (n points per axis, spacing 1/n), with X(0) = 0 exactly. The
// half-open convention keeps dyadic sub-lattices and probe points t with
// c t on-lattice exact for power-of-two n.
struct FieldPath {
    int d = 1;
    int m = 1;
    int n = 0;  // lattice points per axis
    FieldModel model = FieldModel::ofbm;
    std::vector<double> params;  // Hurst exponents resp. stability indices
    std::uint64_t seed = 0;
    long replicaIndex = 0;
    std::vector<double> values;  // n^d points, m components each, row-major

    long pointCount() const;
    double spacing() const { return 1.0 / n; }
    // lattice coordinates of point idx (row-major)
    void latticeCoord(long idx, double* t) const;
    const double* value(long idx) const { return values.data() + idx * m; }
    double* value(long idx) { return values.data() + idx * m; }
    // index of the lattice point with coordinates t; throws if off-lattice
    long latticeIndex(const std::vector<double>& t) const;

    void validate() const;
};

// Operator fractional Brownian sheet family: Gaussian, stationary increments,
// scaling X(c t) =fd c^D X(t) with time exponent E = I_d. D must be real-
// diagonalizable with eigenvalue real parts in (0,1).
struct OfbmSpec {
    Matrix D;
    int d = 1;

    static OfbmSpec scalarHurst(double H, int d = 1, int m = 1);
};

// d = 1, m = 1 paths use exact circulant-embedding synthesis; other shapes
// use a truncated harmonizable spectral sum whose discretization bias is
// documented in the README. Deterministic per (seed, replica).
std::vector<FieldPath> simulate_ofbm(const OfbmSpec& spec, int n, long replicas,
                                     std::uint64_t seed, int workers = 0);

// Multivariate stable Levy motion with independent coordinates: cumulative
// sums of strictly stable increments, increment scale dt^(1/alpha_i); alpha = 2
// coordinates use unit-variance Gaussian increments.
std::vector<FieldPath> simulate_stable_levy(const std::vector<double>& alphas, int n,
                                            long replicas, std::uint64_t seed,
                                            int workers = 0);

struct ProbePointResult {
    std::vector<double> t;
    int coordinate = 0;
    double ks = 0.0;
    long sampleA = 0;
    long sampleB = 0;
};

struct ScalingTestReport {
    double c = 0.0;
    double maxKS = 0.0;
    double threshold = 0.0;
    double significance = 0.0;
    bool pass = false;
    std::vector<ProbePointResult> perPoint;
};

// Distributional check of X(ct) =fd c^D X(t): per probe point and coordinate,
// a two-sample KS statistic between X(ct) over the first replica half and
// c^D X(t) over the second half (independent samples). The threshold is the
// asymptotic critical value at the given suite significance, Sidak-adjusted
// for the number of (probe, coordinate) tests.
ScalingTestReport verify_scaling(const std::vector<FieldPath>& paths, double c,
                                 const Matrix& D,
                                 const std::vector<std::vector<double>>& probePoints,
                                 double significance = 0.01);

// two-sample KS statistic, sup |F_A - F_B|
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_critical_value(long nA, long nB, double alpha);

// CSV path format: header t1,..,td,x1,..,xm; one row per lattice point in
// row-major order; floats with 17 significant digits.
void write_path_csv(const std::string& csvPath, const FieldPath& path);
FieldPath read_path_csv(const std::string& csvPath);
// metadata sidecar (key = value lines)
void write_path_meta(const std::string& metaPath, const FieldPath& path, long replicas);

}  // namespace affdim
