#include "affdim/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affdim/expm.hpp"
#include "affdim/parallel.hpp"
#include "affdim/rng.hpp"

namespace affdim {

long OccupationHistogram::cellIndex(const std::vector<long>& perAxis) const {
    long idx = 0;
    for (int a = 0; a < spaceDim; ++a) idx = idx * cellsPerAxis + perAxis[static_cast<size_t>(a)];
    return idx;
}

OccupationHistogram occupation_histogram(const FieldPath& path, MeasureKind kind,
                                         const std::vector<double>& valueLo,
                                         const std::vector<double>& valueHi,
                                         int cellsPerAxis) {
    path.validate();
    if (cellsPerAxis < 2) throw DomainError("occupation_histogram: need at least 2 cells per axis");
    if (static_cast<int>(valueLo.size()) != path.m || static_cast<int>(valueHi.size()) != path.m)
        throw DomainError("occupation_histogram: bounds must have one entry per value axis");
    for (int i = 0; i < path.m; ++i)
        if (!(valueLo[static_cast<size_t>(i)] < valueHi[static_cast<size_t>(i)]))
            throw DomainError("occupation_histogram: empty bounds");

    OccupationHistogram h;
    h.kind = kind;
    h.spaceDim = (kind == MeasureKind::graph) ? path.d + path.m : path.m;
    h.cellsPerAxis = cellsPerAxis;
    if (kind == MeasureKind::graph) {
        h.lo.assign(static_cast<size_t>(path.d), 0.0);
        h.hi.assign(static_cast<size_t>(path.d), 1.0);
    }
    h.lo.insert(h.lo.end(), valueLo.begin(), valueLo.end());
    h.hi.insert(h.hi.end(), valueHi.begin(), valueHi.end());

    long cellCount = 1;
    for (int a = 0; a < h.spaceDim; ++a) cellCount *= cellsPerAxis;
    h.counts.assign(static_cast<size_t>(cellCount), 0);
    h.totalCount = path.pointCount();

    std::vector<double> coord(static_cast<size_t>(h.spaceDim));
    std::vector<long> cell(static_cast<size_t>(h.spaceDim));
    std::vector<double> t(static_cast<size_t>(path.d));
    for (long p = 0; p < h.totalCount; ++p) {
        int at = 0;
        if (kind == MeasureKind::graph) {
            path.latticeCoord(p, t.data());
            for (int a = 0; a < path.d; ++a) coord[static_cast<size_t>(at++)] = t[static_cast<size_t>(a)];
        }
        for (int a = 0; a < path.m; ++a) coord[static_cast<size_t>(at++)] = path.value(p)[a];

        bool inside = true;
        for (int a = 0; a < h.spaceDim; ++a) {
            const double lo = h.lo[static_cast<size_t>(a)], hi = h.hi[static_cast<size_t>(a)];
            const double v = coord[static_cast<size_t>(a)];
            if (v < lo || v > hi) {
                inside = false;
                break;
            }
            long c = static_cast<long>(std::floor((v - lo) / (hi - lo) * cellsPerAxis));
            c = std::clamp(c, 0L, static_cast<long>(cellsPerAxis) - 1);  // top edge inclusive
            cell[static_cast<size_t>(a)] = c;
        }
        if (inside)
            ++h.counts[static_cast<size_t>(h.cellIndex(cell))];
        else
            ++h.overflowCount;
    }
    return h;
}

std::vector<double> graph_points(const FieldPath& path) {
    path.validate();
    const long N = path.pointCount();
    const int dim = path.d + path.m;
    std::vector<double> out(static_cast<size_t>(N) * dim);
    std::vector<double> t(static_cast<size_t>(path.d));
    for (long p = 0; p < N; ++p) {
        path.latticeCoord(p, t.data());
        double* row = out.data() + p * dim;
        for (int a = 0; a < path.d; ++a) row[a] = t[static_cast<size_t>(a)];
        for (int a = 0; a < path.m; ++a) row[path.d + a] = path.value(p)[a];
    }
    return out;
}

std::vector<double> range_points(const FieldPath& path) {
    path.validate();
    const long N = path.pointCount();
    std::vector<double> out(static_cast<size_t>(N) * path.m);
    for (long p = 0; p < N; ++p)
        for (int a = 0; a < path.m; ++a) out[static_cast<size_t>(p * path.m + a)] = path.value(p)[a];
    return out;
}

BoxCountReport box_count_dimension(const std::vector<double>& flatPoints, int dim,
                                   int scaleMin, int scaleMax, const BoxCountPolicy& policy) {
    if (dim < 1 || dim > 4) throw DomainError("box_count_dimension: dim must be in 1..4");
    const long P = static_cast<long>(flatPoints.size()) / dim;
    if (P * dim != static_cast<long>(flatPoints.size()))
        throw DomainError("box_count_dimension: flat point array size mismatch");
    if (P < 1000) throw DomainError("box_count_dimension: need at least 1000 points");
    if (scaleMin < 1 || scaleMax > 15 || scaleMax - scaleMin + 1 < 4)
        throw DomainError("box_count_dimension: need at least 4 dyadic scales with 1 <= j <= 15");

    BoxCountReport rep;

    // normalize each axis to [0,1]; axes of zero extent collapse
    std::vector<double> lo(static_cast<size_t>(dim), std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<size_t>(dim), -std::numeric_limits<double>::infinity());
    for (long p = 0; p < P; ++p)
        for (int a = 0; a < dim; ++a) {
            const double v = flatPoints[static_cast<size_t>(p * dim + a)];
            lo[static_cast<size_t>(a)] = std::min(lo[static_cast<size_t>(a)], v);
            hi[static_cast<size_t>(a)] = std::max(hi[static_cast<size_t>(a)], v);
        }
    bool anyExtent = false;
    for (int a = 0; a < dim; ++a) anyExtent = anyExtent || hi[static_cast<size_t>(a)] > lo[static_cast<size_t>(a)];
    if (!anyExtent) {
        rep.degenerate = true;
        rep.slope = 0.0;
        for (int j = scaleMin; j <= scaleMax; ++j) {
            rep.scaleExponents.push_back(j);
            rep.counts.push_back(1);
        }
        return rep;
    }

    std::vector<std::uint64_t> keys(static_cast<size_t>(P));
    for (int j = scaleMin; j <= scaleMax; ++j) {
        const double boxes = std::ldexp(1.0, j);
        for (long p = 0; p < P; ++p) {
            std::uint64_t key = 0;
            for (int a = 0; a < dim; ++a) {
                const double l = lo[static_cast<size_t>(a)], u = hi[static_cast<size_t>(a)];
                double x = (u > l) ? (flatPoints[static_cast<size_t>(p * dim + a)] - l) / (u - l) : 0.0;
                long c = static_cast<long>(x * boxes);
                c = std::clamp(c, 0L, static_cast<long>(boxes) - 1);
                key = (key << 16) | static_cast<std::uint64_t>(c);
            }
            keys[static_cast<size_t>(p)] = key;
        }
        std::sort(keys.begin(), keys.end());
        long n = 1;
        for (long p = 1; p < P; ++p)
            if (keys[static_cast<size_t>(p)] != keys[static_cast<size_t>(p - 1)]) ++n;
        rep.scaleExponents.push_back(j);
        rep.counts.push_back(n);
    }

    // select the fit window
    const int S = static_cast<int>(rep.counts.size());
    std::vector<int> window;
    if (policy.mode == BoxCountPolicy::Mode::autoWindow) {
        for (int i = 0; i < S; ++i) {
            const double N = static_cast<double>(rep.counts[static_cast<size_t>(i)]);
            if (N >= static_cast<double>(policy.minCount) &&
                N <= policy.saturationFraction * static_cast<double>(P))
                window.push_back(i);
        }
    } else {
        for (int i = policy.dropCoarsest; i < S - policy.dropFinest; ++i) window.push_back(i);
    }
    if (static_cast<int>(window.size()) < 2) {
        window.clear();
        for (int i = 0; i < S; ++i) window.push_back(i);
    }
    rep.fitRange = window;

    // least squares of log2 N on j
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i : window) {
        const double x = rep.scaleExponents[static_cast<size_t>(i)];
        const double y = std::log2(static_cast<double>(rep.counts[static_cast<size_t>(i)]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double w = static_cast<double>(window.size());
    const double denom = w * sxx - sx * sx;
    rep.slope = (denom != 0.0) ? (w * sxy - sx * sy) / denom : 0.0;
    rep.intercept = (sy - rep.slope * sx) / w;
    double ss = 0.0;
    for (int i : window) {
        const double x = rep.scaleExponents[static_cast<size_t>(i)];
        const double y = std::log2(static_cast<double>(rep.counts[static_cast<size_t>(i)]));
        const double e = y - (rep.intercept + rep.slope * x);
        ss += e * e;
    }
    rep.residual = std::sqrt(ss / w);
    return rep;
}

namespace {

double pair_distance(const FieldPath& path, MeasureKind kind, long i, long j,
                     std::vector<double>& ti, std::vector<double>& tj) {
    double dist = 0.0;
    if (kind == MeasureKind::graph) {
        path.latticeCoord(i, ti.data());
        path.latticeCoord(j, tj.data());
        double dt2 = 0.0;
        for (int a = 0; a < path.d; ++a) {
            const double dd = ti[static_cast<size_t>(a)] - tj[static_cast<size_t>(a)];
            dt2 += dd * dd;
        }
        dist += std::sqrt(dt2);
    }
    double dx2 = 0.0;
    for (int a = 0; a < path.m; ++a) {
        const double dd = path.value(i)[a] - path.value(j)[a];
        dx2 += dd * dd;
    }
    return dist + std::sqrt(dx2);
}

}  // namespace

EnergyEstimate energy_integral(const FieldPath& path, MeasureKind kind, double gamma,
                               long pairBudget, std::uint64_t seed) {
    path.validate();
    if (gamma < 0.0) throw DomainError("energy_integral: gamma must be >= 0");
    const long N = path.pointCount();
    if (N < 2) throw DomainError("energy_integral: need at least two points");

    EnergyEstimate est;
    est.capValue = std::pow(path.spacing(), -gamma);

    std::vector<double> ti(static_cast<size_t>(path.d)), tj(static_cast<size_t>(path.d));
    double sum = 0.0;
    long used = 0;
    const long allPairs = N * (N - 1) / 2;
    if (pairBudget < 0 || pairBudget >= allPairs) {
        for (long i = 0; i < N; ++i)
            for (long j = i + 1; j < N; ++j) {
                const double dist = pair_distance(path, kind, i, j, ti, tj);
                if (dist == 0.0) {
                    sum += est.capValue;
                    ++est.cappedPairs;
                } else {
                    sum += std::pow(dist, -gamma);
                }
                ++used;
            }
    } else {
        CounterRng rng(seed, 0x656e6572ULL /* pair sampling stream */);
        while (used < pairBudget) {
            const long i = static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(N));
            const long j = static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(N));
            if (i == j) continue;
            const double dist = pair_distance(path, kind, i, j, ti, tj);
            if (dist == 0.0) {
                sum += est.capValue;
                ++est.cappedPairs;
            } else {
                sum += std::pow(dist, -gamma);
            }
            ++used;
        }
    }
    est.pairsUsed = used;
    est.value = sum / static_cast<double>(used);
    return est;
}

// Calibrated on the analytic flat-path control at refinement sizes 512..4096:
// gamma one grid step below the critical exponent grows at <= 1.07 per
// doubling there, one step above at >= 1.14.
double default_blowup_ratio() { return 1.115; }

BlowupScan energy_blowup_scan(const std::vector<FieldPath>& paths, MeasureKind kind,
                              const std::vector<double>& gammaGrid,
                              const std::vector<long>& refinements, double ratioThreshold) {
    if (paths.empty()) throw DomainError("energy_blowup_scan: no paths");
    if (refinements.size() < 2)
        throw DomainError("energy_blowup_scan: need at least two refinement levels");
    if (ratioThreshold <= 0.0) ratioThreshold = default_blowup_ratio();
    const FieldPath& ref = paths.front();
    if (ref.d != 1) throw DomainError("energy_blowup_scan: refinement subsampling requires d = 1");

    for (size_t l = 1; l < refinements.size(); ++l)
        if (refinements[l] <= refinements[l - 1])
            throw DomainError("energy_blowup_scan: refinement sizes must increase");
    for (long S : refinements) {
        if (S < 2 || S > 4096)
            throw DomainError("energy_blowup_scan: refinement sizes must lie in [2, 4096]");
        if (ref.n % S != 0)
            throw DomainError("energy_blowup_scan: refinement sizes must divide n");
    }

    BlowupScan scan;
    scan.refinementSizes = refinements;
    scan.ratioThreshold = ratioThreshold;
    scan.firstDivergentGamma = std::numeric_limits<double>::quiet_NaN();

    for (double gamma : gammaGrid) {
        BlowupRow row;
        row.gamma = gamma;
        row.estimates.assign(refinements.size(), 0.0);
        row.divergent = false;
        scan.rows.push_back(row);
    }

    for (const FieldPath& path : paths) {
        path.validate();
        for (size_t l = 0; l < refinements.size(); ++l) {
            const long S = refinements[l];
            const long stride = path.n / S;
            // gather the sub-lattice; its spacing is 1/S
            std::vector<double> t(static_cast<size_t>(S));
            std::vector<const double*> x(static_cast<size_t>(S));
            for (long s = 0; s < S; ++s) {
                const long idx = s * stride;
                t[static_cast<size_t>(s)] = static_cast<double>(s) / static_cast<double>(S);
                x[static_cast<size_t>(s)] = path.value(idx);
            }
            const double cap = static_cast<double>(S);  // spacing^-1 at this level
            std::vector<double> sums(gammaGrid.size(), 0.0);
            long pairs = 0;
            for (long i = 0; i < S; ++i)
                for (long j = i + 1; j < S; ++j) {
                    double dist = 0.0;
                    if (kind == MeasureKind::graph) dist += std::abs(t[static_cast<size_t>(i)] - t[static_cast<size_t>(j)]);
                    double dx2 = 0.0;
                    for (int a = 0; a < path.m; ++a) {
                        const double dd = x[static_cast<size_t>(i)][a] - x[static_cast<size_t>(j)][a];
                        dx2 += dd * dd;
                    }
                    dist += std::sqrt(dx2);
                    const double logd = (dist == 0.0) ? std::log(1.0 / cap) : std::log(dist);
                    for (size_t g = 0; g < gammaGrid.size(); ++g)
                        sums[g] += std::exp(-gammaGrid[g] * logd);
                    ++pairs;
                }
            for (size_t g = 0; g < gammaGrid.size(); ++g)
                scan.rows[g].estimates[l] += sums[g] / static_cast<double>(pairs) /
                                             static_cast<double>(paths.size());
        }
    }

    for (auto& row : scan.rows) {
        const size_t L = row.estimates.size();
        row.growthPerDoubling = row.estimates[L - 1] / row.estimates[L - 2];
        row.divergent = row.growthPerDoubling > ratioThreshold;
    }
    for (const auto& row : scan.rows)
        if (row.divergent) {
            scan.firstDivergentGamma = row.gamma;
            break;
        }
    return scan;
}

namespace {

struct BinnedSample {
    std::vector<double> bins;
    double lo = 0.0, width = 0.0;
    long total = 0;
};

BinnedSample bin_samples(const std::vector<double>& xs, double lo, double hi, int nbins) {
    BinnedSample b;
    b.lo = lo;
    b.width = (hi - lo) / nbins;
    b.bins.assign(static_cast<size_t>(nbins), 0.0);
    for (double v : xs) {
        if (v < lo || v >= hi) continue;  // far tails cannot affect the annulus
        ++b.bins[static_cast<size_t>((v - lo) / b.width)];
    }
    b.total = static_cast<long>(xs.size());
    return b;
}

double kde_at(const BinnedSample& b, double x, double h) {
    const double span = 6.0 * h;
    const long i0 = std::max(0L, static_cast<long>((x - span - b.lo) / b.width));
    const long i1 = std::min(static_cast<long>(b.bins.size()) - 1,
                             static_cast<long>((x + span - b.lo) / b.width));
    double acc = 0.0;
    const double inv = 1.0 / h;
    for (long i = i0; i <= i1; ++i) {
        if (b.bins[static_cast<size_t>(i)] == 0.0) continue;
        const double center = b.lo + (i + 0.5) * b.width;
        const double z = (x - center) * inv;
        acc += b.bins[static_cast<size_t>(i)] * std::exp(-0.5 * z * z);
    }
    return acc * inv * 0.3989422804014326779399 / static_cast<double>(b.total);
}

}  // namespace

DensityProbeResult density_sup_probe(const std::vector<FieldPath>& paths,
                                     const ExponentPair& pair) {
    if (paths.empty()) throw DomainError("density_sup_probe: no sample paths");
    pair.validate();
    const FieldPath& ref = paths.front();
    if (ref.d != 1 || ref.m != 1 || pair.d() != 1 || pair.m() != 1)
        throw DomainError("density_sup_probe: implemented for d = m = 1");

    const double wt = matrix_power_scale(pair.E, pair.c)(0, 0);
    const double wx = matrix_power_scale(pair.D, pair.c)(0, 0);
    if (!(wt < 1.0 && wx < 1.0 && wt > 0.0 && wx > 0.0))
        throw DomainError("density_sup_probe: annulus is empty for this pair");

    DensityProbeResult res;
    res.note = "heuristic kernel-density diagnostic of the bounded-intensity condition";

    for (int j = 1; j < ref.n; ++j) {
        const double t = static_cast<double>(j) / (ref.n - 1);
        if (t > 1.0) break;
        std::vector<double> xs;
        xs.reserve(paths.size());
        for (const auto& p : paths) xs.push_back(p.value(j)[0]);

        // spread statistics for the plug-in bandwidth
        std::vector<double> sorted(xs);
        std::sort(sorted.begin(), sorted.end());
        const double q1 = sorted[sorted.size() / 4];
        const double q3 = sorted[(3 * sorted.size()) / 4];
        double mean = 0.0;
        for (double v : xs) mean += v;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double v : xs) var += (v - mean) * (v - mean);
        var /= static_cast<double>(xs.size());
        const double spread = std::min(std::sqrt(var), (q3 - q1) / 1.349);
        if (!(spread > 0.0)) {
            res.unboundedFlag = true;
            res.note = "degenerate marginal law: no density exists";
            res.tAt = t;
            return res;
        }
        const double h = 0.9 * spread * std::pow(static_cast<double>(xs.size()), -0.2);

        BinnedSample bs = bin_samples(xs, -1.0 - 7.0 * h, 1.0 + 7.0 * h, 8192);

        // annulus section at this t: inside the time slab the inner box is cut out
        std::vector<std::pair<double, double>> segments;
        if (t <= wt)
            segments = {{-1.0, -wx}, {wx, 1.0}};
        else
            segments = {{-1.0, 1.0}};

        DensityProbeResult::PerT pt;
        pt.t = t;
        pt.bandwidth = h;
        for (const auto& [a, b] : segments) {
            const int G = 128;
            for (int g = 0; g <= G; ++g) {
                const double x = a + (b - a) * g / G;
                const double dens = kde_at(bs, x, h);
                if (dens > pt.maxDensity) pt.maxDensity = dens;
                if (dens > res.supDensity) {
                    res.supDensity = dens;
                    res.tAt = t;
                    res.xAt = x;
                }
            }
        }
        res.perT.push_back(pt);
    }
    return res;
}

DensityProbeResult density_sup_probe(FieldModel model, const std::vector<double>& params,
                                     const ExponentPair& pair, long samplesPerT, int n,
                                     std::uint64_t seed, int workers) {
    std::vector<FieldPath> paths;
    if (model == FieldModel::ofbm) {
        if (params.size() != 1) throw DomainError("density_sup_probe: ofbm expects one Hurst");
        paths = simulate_ofbm(OfbmSpec::scalarHurst(params[0]), n, samplesPerT, seed, workers);
    } else {
        paths = simulate_stable_levy(params, n, samplesPerT, seed, workers);
    }
    return density_sup_probe(paths, pair);
}

}  // namespace affdim
