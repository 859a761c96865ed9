#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affdim/fields.hpp"
#include "affdim/spectrum.hpp"

namespace affdim {

enum class MeasureKind { graph, range };

// Gridded approximation of the occupation measure of the graph (t, X(t)) or
// of the range X(t); every lattice point deposits weight 1/N where N is the
// lattice point count, so interior mass plus overflow mass is exactly one.
struct OccupationHistogram {
    MeasureKind kind = MeasureKind::graph;
    int spaceDim = 0;            // d+m for graph, m for range
    std::vector<double> lo, hi;  // per-axis bounds (time axes are [0,1])
    int cellsPerAxis = 0;
    std::vector<long> counts;    // cellsPerAxis^spaceDim cells, row-major
    long overflowCount = 0;
    long totalCount = 0;

    double mass(long cell) const {
        return static_cast<double>(counts[static_cast<size_t>(cell)]) / totalCount;
    }
    double totalMass() const {
        return static_cast<double>(totalCount - overflowCount) / totalCount;
    }
    double overflowMass() const {
        return static_cast<double>(overflowCount) / totalCount;
    }
    long cellIndex(const std::vector<long>& perAxis) const;
};

// valueLo/valueHi bound the m value axes; heavy-tailed paths land outside and
// are accounted in overflowMass.
OccupationHistogram occupation_histogram(const FieldPath& path, MeasureKind kind,
                                         const std::vector<double>& valueLo,
                                         const std::vector<double>& valueHi,
                                         int cellsPerAxis);

std::vector<double> graph_points(const FieldPath& path);  // (t, X), dim d+m
std::vector<double> range_points(const FieldPath& path);  // X, dim m

struct BoxCountPolicy {
    enum class Mode { autoWindow, trimOctaves };
    Mode mode = Mode::autoWindow;
    // autoWindow: keep scales with minCount <= N(eps) <= saturationFraction * points
    long minCount = 64;
    double saturationFraction = 0.25;
    // trimOctaves: drop this many finest/coarsest scales
    int dropFinest = 2;
    int dropCoarsest = 1;
};

struct BoxCountReport {
    std::vector<int> scaleExponents;  // dyadic j, eps = 2^-j of the unit cube
    std::vector<long> counts;         // occupied boxes N(eps)
    std::vector<int> fitRange;        // indices used by the fit
    double slope = 0.0;               // fitted dimension
    double intercept = 0.0;
    double residual = 0.0;            // rms residual of the log-log fit
    bool degenerate = false;
};

// Counts occupied dyadic boxes of the per-axis normalized point cloud and
// fits log2 N against j by least squares over the policy-selected window.
BoxCountReport box_count_dimension(const std::vector<double>& flatPoints, int dim,
                                   int scaleMin, int scaleMax,
                                   const BoxCountPolicy& policy = {});

struct EnergyEstimate {
    double value = 0.0;
    long pairsUsed = 0;
    long cappedPairs = 0;  // exact-duplicate pairs contributing the cap value
    double capValue = 0.0; // (lattice spacing)^-gamma
};

// Monte Carlo (or full-pair) estimate of the gamma-energy of the graph or
// range occupation measure; pairBudget < 0 sums every distinct pair.
EnergyEstimate energy_integral(const FieldPath& path, MeasureKind kind, double gamma,
                               long pairBudget = -1, std::uint64_t seed = 0);

struct BlowupRow {
    double gamma = 0.0;
    std::vector<double> estimates;    // one per refinement level
    double growthPerDoubling = 0.0;   // estimate ratio at the finest doubling
    bool divergent = false;
};

struct BlowupScan {
    std::vector<long> refinementSizes;
    std::vector<BlowupRow> rows;
    double ratioThreshold = 0.0;
    double firstDivergentGamma = 0.0;  // NaN when nothing is flagged
};

// Flags gamma values whose energy estimate keeps growing under lattice
// refinement; the first flagged gamma brackets the dimension from below.
// Refinement sizes are sub-lattice sizes (each size-1 must divide n-1).
double default_blowup_ratio();
BlowupScan energy_blowup_scan(const std::vector<FieldPath>& paths, MeasureKind kind,
                              const std::vector<double>& gammaGrid,
                              const std::vector<long>& refinements,
                              double ratioThreshold = -1.0);

// Kernel-density diagnostic for the boundedly-continuous-intensity condition:
// estimates sup of the marginal density p_t(x) over the fundamental annulus
// [-1,1]^(d+m) \ W([-1,1]^(d+m)), W = c^(E+D). Heuristic evidence only.
struct DensityProbeResult {
    double supDensity = 0.0;
    double tAt = 0.0;
    double xAt = 0.0;
    bool unboundedFlag = false;  // degenerate law, no density exists
    std::string note;
    struct PerT {
        double t = 0.0;
        double maxDensity = 0.0;
        double bandwidth = 0.0;
    };
    std::vector<PerT> perT;
};

DensityProbeResult density_sup_probe(const std::vector<FieldPath>& paths,
                                     const ExponentPair& pair);
DensityProbeResult density_sup_probe(FieldModel model, const std::vector<double>& params,
                                     const ExponentPair& pair, long samplesPerT, int n,
                                     std::uint64_t seed = 1, int workers = 0);

}  // namespace affdim
