#include "affdim/fields.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "affdim/expm.hpp"
#include "affdim/fft.hpp"
#include "affdim/parallel.hpp"
#include "affdim/rng.hpp"

namespace affdim {

std::string field_model_name(FieldModel m) {
    return m == FieldModel::ofbm ? "ofbm" : "stable-levy";
}

long FieldPath::pointCount() const {
    long p = 1;
    for (int i = 0; i < d; ++i) p *= n;
    return p;
}

void FieldPath::latticeCoord(long idx, double* t) const {
    for (int axis = d - 1; axis >= 0; --axis) {
        t[axis] = static_cast<double>(idx % n) / n;
        idx /= n;
    }
}

long FieldPath::latticeIndex(const std::vector<double>& t) const {
    if (static_cast<int>(t.size()) != d)
        throw DomainError("FieldPath::latticeIndex: wrong dimension");
    long idx = 0;
    for (int axis = 0; axis < d; ++axis) {
        const double j = t[axis] * n;
        const double r = std::round(j);
        if (std::abs(j - r) > 1e-9 * n || r < 0 || r >= n)
            throw DomainError("FieldPath::latticeIndex: point is off the lattice");
        idx = idx * n + static_cast<long>(r);
    }
    return idx;
}

void FieldPath::validate() const {
    if (n < 2) throw DomainError("FieldPath: need at least two lattice points per axis");
    if (static_cast<long>(values.size()) != pointCount() * m)
        throw DomainError("FieldPath: value count does not match lattice");
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError("FieldPath: non-finite value");
}

OfbmSpec OfbmSpec::scalarHurst(double H, int d, int m) {
    OfbmSpec s;
    s.d = d;
    s.D = H * Matrix::Identity(m, m);
    return s;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Exact fractional Gaussian noise of length L at unit spacing via circulant
// embedding; 2L must be a power of two.
std::vector<double> fgn_unit(double H, long L, CounterRng& rng) {
    const long M = 2 * L;
    std::vector<std::complex<double>> c(static_cast<size_t>(M));
    auto cov = [H](double k) {
        return 0.5 * (std::pow(std::abs(k + 1), 2 * H) - 2 * std::pow(std::abs(k), 2 * H) +
                      std::pow(std::abs(k - 1), 2 * H));
    };
    for (long k = 0; k <= L; ++k) c[static_cast<size_t>(k)] = cov(static_cast<double>(k));
    for (long k = 1; k < L; ++k) c[static_cast<size_t>(M - k)] = c[static_cast<size_t>(k)];
    fft_inplace(c, false);

    double minEv = 0.0, maxEv = 0.0;
    for (auto& z : c) {
        minEv = std::min(minEv, z.real());
        maxEv = std::max(maxEv, z.real());
    }
    if (minEv < -1e-8 * maxEv)
        throw NumericError("fgn: circulant embedding produced negative eigenvalues");

    std::vector<std::complex<double>> y(static_cast<size_t>(M));
    y[0] = std::sqrt(std::max(0.0, c[0].real())) * rng.gaussian();
    y[static_cast<size_t>(L)] =
        std::sqrt(std::max(0.0, c[static_cast<size_t>(L)].real())) * rng.gaussian();
    for (long k = 1; k < L; ++k) {
        const double s = std::sqrt(std::max(0.0, c[static_cast<size_t>(k)].real()) / 2.0);
        const double re = s * rng.gaussian();
        const double im = s * rng.gaussian();
        y[static_cast<size_t>(k)] = {re, im};
        y[static_cast<size_t>(M - k)] = {re, -im};
    }
    fft_inplace(y, false);
    std::vector<double> out(static_cast<size_t>(L));
    const double norm = 1.0 / std::sqrt(static_cast<double>(M));
    for (long k = 0; k < L; ++k) out[static_cast<size_t>(k)] = y[static_cast<size_t>(k)].real() * norm;
    return out;
}

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

// Real diagonalization D = P diag(h) P^-1; throws unless the eigenvalues are
// real with real parts in (0,1) and the eigenbasis reproduces D.
void diagonalize_scaling(const Matrix& D, Matrix& P, Matrix& Pinv, std::vector<double>& h) {
    Eigen::EigenSolver<Matrix> es(D);
    if (es.info() != Eigen::Success)
        throw NumericError("simulate_ofbm: eigensolver failed on D");
    const auto ev = es.eigenvalues();
    const auto V = es.eigenvectors();
    const int m = static_cast<int>(D.rows());
    h.resize(static_cast<size_t>(m));
    P.resize(m, m);
    for (int i = 0; i < m; ++i) {
        if (std::abs(ev(i).imag()) > 1e-9 * (1.0 + std::abs(ev(i).real())))
            throw DomainError("simulate_ofbm: unsupported model (D has complex eigenvalues)");
        h[static_cast<size_t>(i)] = ev(i).real();
        if (!(ev(i).real() > 0.0 && ev(i).real() < 1.0))
            throw DomainError("simulate_ofbm: unsupported model (eigenvalues of D must lie in (0,1))");
        P.col(i) = V.col(i).real();
    }
    Eigen::FullPivLU<Matrix> lu(P);
    if (!lu.isInvertible())
        throw DomainError("simulate_ofbm: unsupported model (D is not real-diagonalizable)");
    Pinv = lu.inverse();
    if ((P * Eigen::Map<Vector>(h.data(), m).asDiagonal() * Pinv - D).norm() >
        1e-8 * (1.0 + D.norm()))
        throw DomainError("simulate_ofbm: unsupported model (D is not real-diagonalizable)");
}

// Truncated harmonizable spectral sum for an isotropic Hurst-H scalar field
// on [0,1]^2, normalized to unit variance at t = (1,0). Periodization period
// 4 and frequency cut |p|,|q| <= 32 give a small documented bias.
std::vector<double> fractional_field_2d(double H, int n, CounterRng& rng) {
    constexpr int K = 32;
    constexpr double T = 4.0;
    struct Freq {
        double x, y, w;
    };
    static thread_local std::vector<Freq> freqs;
    static thread_local double cachedH = -1.0;
    static thread_local double norm = 1.0;
    if (cachedH != H || freqs.empty()) {
        freqs.clear();
        double var1 = 0.0;
        for (int p = 0; p <= K; ++p)
            for (int q = -K; q <= K; ++q) {
                if (p == 0 && q <= 0) continue;  // half lattice, xi and -xi merged
                const double fx = kTwoPi * p / T;
                const double fy = kTwoPi * q / T;
                const double w = std::pow(fx * fx + fy * fy, -(H + 1.0) / 2.0);
                freqs.push_back({fx, fy, w});
                var1 += 2.0 * w * w * (1.0 - std::cos(fx));  // theta at t=(1,0)
            }
        norm = 1.0 / std::sqrt(var1);
        cachedH = H;
    }

    std::vector<double> g(freqs.size()), gp(freqs.size());
    for (size_t i = 0; i < freqs.size(); ++i) {
        g[i] = rng.gaussian();
        gp[i] = rng.gaussian();
    }
    std::vector<double> out(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double tx = static_cast<double>(i) / n;
        for (int j = 0; j < n; ++j) {
            const double ty = static_cast<double>(j) / n;
            double acc = 0.0;
            for (size_t f = 0; f < freqs.size(); ++f) {
                const double th = freqs[f].x * tx + freqs[f].y * ty;
                acc += freqs[f].w * ((std::cos(th) - 1.0) * g[f] + std::sin(th) * gp[f]);
            }
            out[static_cast<size_t>(i) * n + j] = acc * norm;
        }
    }
    return out;
}

}  // namespace

std::vector<FieldPath> simulate_ofbm(const OfbmSpec& spec, int n, long replicas,
                                     std::uint64_t seed, int workers) {
    if (spec.d != 1 && spec.d != 2)
        throw DomainError("simulate_ofbm: d must be 1 or 2");
    const int m = static_cast<int>(spec.D.rows());
    if (m != 1 && m != 2) throw DomainError("simulate_ofbm: m must be 1 or 2");
    if (!is_power_of_two(n)) throw DomainError("simulate_ofbm: n must be a power of two");
    if (replicas < 1) throw DomainError("simulate_ofbm: need at least one replica");

    Matrix P, Pinv;
    std::vector<double> h;
    diagonalize_scaling(spec.D, P, Pinv, h);

    std::vector<FieldPath> paths(static_cast<size_t>(replicas));
    parallel_for(replicas, workers, [&](long r) {
        FieldPath path;
        path.d = spec.d;
        path.m = m;
        path.n = n;
        path.model = FieldModel::ofbm;
        path.params = h;
        path.seed = seed;
        path.replicaIndex = r;
        const long N = path.pointCount();
        path.values.assign(static_cast<size_t>(N) * m, 0.0);
        CounterRng rng(seed, static_cast<std::uint64_t>(r));

        // independent scalar fields in the eigenbasis of D
        std::vector<std::vector<double>> comp(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            if (spec.d == 1) {
                // exact: n-1 unit-spacing fGn increments, rescaled to the lattice
                std::vector<double> inc = fgn_unit(h[static_cast<size_t>(i)], n, rng);
                std::vector<double> x(static_cast<size_t>(n), 0.0);
                const double scale = std::pow(path.spacing(), h[static_cast<size_t>(i)]);
                for (int j = 1; j < n; ++j)
                    x[static_cast<size_t>(j)] =
                        x[static_cast<size_t>(j - 1)] + scale * inc[static_cast<size_t>(j - 1)];
                comp[static_cast<size_t>(i)] = std::move(x);
            } else {
                comp[static_cast<size_t>(i)] = fractional_field_2d(h[static_cast<size_t>(i)], n, rng);
            }
        }
        for (long p = 0; p < N; ++p)
            for (int row = 0; row < m; ++row) {
                double v = 0.0;
                for (int col = 0; col < m; ++col)
                    v += P(row, col) * comp[static_cast<size_t>(col)][static_cast<size_t>(p)];
                path.value(p)[row] = v;
            }
        paths[static_cast<size_t>(r)] = std::move(path);
    });
    return paths;
}

std::vector<FieldPath> simulate_stable_levy(const std::vector<double>& alphas, int n,
                                            long replicas, std::uint64_t seed, int workers) {
    if (alphas.empty()) throw DomainError("simulate_stable_levy: need at least one alpha");
    for (double a : alphas)
        if (!(a > 0.0 && a <= 2.0))
            throw DomainError("simulate_stable_levy: alpha must lie in (0,2]");
    if (n < 2) throw DomainError("simulate_stable_levy: need n >= 2");
    if (replicas < 1) throw DomainError("simulate_stable_levy: need at least one replica");

    const int m = static_cast<int>(alphas.size());
    std::vector<FieldPath> paths(static_cast<size_t>(replicas));
    parallel_for(replicas, workers, [&](long r) {
        FieldPath path;
        path.d = 1;
        path.m = m;
        path.n = n;
        path.model = FieldModel::stableLevy;
        path.params = alphas;
        path.seed = seed;
        path.replicaIndex = r;
        path.values.assign(static_cast<size_t>(n) * m, 0.0);
        CounterRng rng(seed, static_cast<std::uint64_t>(r));

        std::vector<double> scale(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i)
            scale[static_cast<size_t>(i)] = std::pow(path.spacing(), 1.0 / alphas[static_cast<size_t>(i)]);
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < m; ++i) {
                const double a = alphas[static_cast<size_t>(i)];
                const double inc = (a == 2.0) ? rng.gaussian() : rng.stable_standard(a);
                path.value(j)[i] = path.value(j - 1)[i] + scale[static_cast<size_t>(i)] * inc;
            }
        paths[static_cast<size_t>(r)] = std::move(path);
    });
    return paths;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical_value(long nA, long nB, double alpha) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt(static_cast<double>(nA + nB) /
                         (static_cast<double>(nA) * static_cast<double>(nB)));
}

ScalingTestReport verify_scaling(const std::vector<FieldPath>& paths, double c,
                                 const Matrix& D,
                                 const std::vector<std::vector<double>>& probePoints,
                                 double significance) {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("verify_scaling: c must lie in (0,1)");
    if (paths.size() < 200)
        throw DomainError("verify_scaling: need at least 200 replicas");
    if (probePoints.empty()) throw DomainError("verify_scaling: no probe points");
    const FieldPath& ref = paths.front();
    if (static_cast<int>(D.rows()) != ref.m)
        throw DomainError("verify_scaling: D order does not match path dimension");

    const Matrix cD = matrix_power_scale(D, c);
    const long half = static_cast<long>(paths.size()) / 2;
    const long tests = static_cast<long>(probePoints.size()) * ref.m;
    const double alphaPer = 1.0 - std::pow(1.0 - significance, 1.0 / static_cast<double>(tests));

    ScalingTestReport rep;
    rep.c = c;
    rep.significance = significance;
    rep.threshold = ks_critical_value(half, static_cast<long>(paths.size()) - half, alphaPer);

    for (const auto& t : probePoints) {
        std::vector<double> ct(t.size());
        for (size_t i = 0; i < t.size(); ++i) ct[i] = c * t[i];
        const long idxT = ref.latticeIndex(t);
        const long idxCt = ref.latticeIndex(ct);

        // samples from distinct replica halves so the two sides are independent
        std::vector<Vector> xa, xb;
        for (long r = 0; r < half; ++r)
            xa.emplace_back(Eigen::Map<const Vector>(paths[static_cast<size_t>(r)].value(idxCt), ref.m));
        for (size_t r = static_cast<size_t>(half); r < paths.size(); ++r)
            xb.emplace_back(cD * Eigen::Map<const Vector>(paths[r].value(idxT), ref.m));

        for (int coord = 0; coord < ref.m; ++coord) {
            std::vector<double> sa(xa.size()), sb(xb.size());
            for (size_t r = 0; r < xa.size(); ++r) sa[r] = xa[r](coord);
            for (size_t r = 0; r < xb.size(); ++r) sb[r] = xb[r](coord);
            ProbePointResult pr;
            pr.t = t;
            pr.coordinate = coord;
            pr.ks = ks_statistic(sa, sb);
            pr.sampleA = static_cast<long>(sa.size());
            pr.sampleB = static_cast<long>(sb.size());
            rep.maxKS = std::max(rep.maxKS, pr.ks);
            rep.perPoint.push_back(std::move(pr));
        }
    }
    rep.pass = rep.maxKS < rep.threshold;
    return rep;
}

void write_path_csv(const std::string& csvPath, const FieldPath& path) {
    std::ofstream out(csvPath);
    if (!out) throw DomainError("cannot open path CSV for writing: " + csvPath);
    for (int i = 0; i < path.d; ++i) out << (i ? "," : "") << "t" << (i + 1);
    for (int i = 0; i < path.m; ++i) out << ",x" << (i + 1);
    out << "\n";
    char buf[32];
    std::vector<double> t(static_cast<size_t>(path.d));
    const long N = path.pointCount();
    for (long p = 0; p < N; ++p) {
        path.latticeCoord(p, t.data());
        for (int i = 0; i < path.d; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", t[static_cast<size_t>(i)]);
            out << (i ? "," : "") << buf;
        }
        for (int i = 0; i < path.m; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", path.value(p)[i]);
            out << "," << buf;
        }
        out << "\n";
    }
}

FieldPath read_path_csv(const std::string& csvPath) {
    std::ifstream in(csvPath);
    if (!in) throw DomainError("cannot open path CSV: " + csvPath);
    std::string header;
    if (!std::getline(in, header)) throw DomainError("empty path CSV: " + csvPath);

    int d = 0, m = 0;
    {
        std::stringstream ss(header);
        std::string col;
        while (std::getline(ss, col, ',')) {
            if (col.rfind("t", 0) == 0) ++d;
            else if (col.rfind("x", 0) == 0) ++m;
            else throw DomainError("path CSV: unexpected column " + col);
        }
    }
    if (d < 1 || m < 1) throw DomainError("path CSV: header must name t and x columns");

    std::vector<double> flat;
    std::string line;
    long rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= d) flat.push_back(std::stod(cell));
            ++col;
        }
        if (col != d + m) throw DomainError("path CSV: ragged row");
        ++rows;
    }
    FieldPath path;
    path.d = d;
    path.m = m;
    double nd = std::pow(static_cast<double>(rows), 1.0 / d);
    path.n = static_cast<int>(std::lround(nd));
    if (path.pointCount() != rows)
        throw DomainError("path CSV: row count is not a d-th power of a lattice size");
    path.values = std::move(flat);
    path.validate();
    return path;
}

void write_path_meta(const std::string& metaPath, const FieldPath& path, long replicas) {
    std::ofstream out(metaPath);
    if (!out) throw DomainError("cannot open metadata file for writing: " + metaPath);
    char buf[32];
    out << "model = " << field_model_name(path.model) << "\n";
    out << "d = " << path.d << "\n";
    out << "m = " << path.m << "\n";
    out << "n = " << path.n << "\n";
    out << "seed = " << path.seed << "\n";
    out << "replicas = " << replicas << "\n";
    out << "replica_index = " << path.replicaIndex << "\n";
    out << "params =";
    for (double p : path.params) {
        std::snprintf(buf, sizeof buf, "%.17g", p);
        out << " " << buf;
    }
    out << "\n";
}

}  // namespace affdim
