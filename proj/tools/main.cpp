#include <CLI11.hpp>
#include <cstdio>

#include "affdim/errors.hpp"
#include "commands.hpp"

using namespace affdim;
using namespace affdim::cli;

int main(int argc, char** argv) {
    CLI::App app{"affdim: dimension exponents of self-affine random fields"};
    app.require_subcommand(1);
    app.set_config("--config");

    SvalOptions sval;
    auto* cs = app.add_subcommand("sval", "singular-value-function affinity exponent s(W, x)");
    cs->add_option("--E", sval.eFile, "time exponent matrix file");
    cs->add_option("--D", sval.dFile, "value exponent matrix file");
    cs->add_option("--W", sval.wFile, "joint contraction matrix file (with --x)");
    cs->add_option("--x", sval.x, "scaling factor x in (0,1)");
    cs->add_option("--c", sval.c, "scale c in (0,1); sweeping {0.1,0.5,0.9} when omitted");
    cs->add_flag("--numeric", sval.numeric, "also run the matrix-power limit");
    cs->add_option("--tol", sval.tol, "numeric root tolerance");
    cs->add_option("--out", sval.outDir, "output directory");

    DimOptions dim;
    auto* cd = app.add_subcommand("dim", "closed-form dimension formulas and identity checks");
    cd->add_option("--family", dim.family, "levy | oss-stable (default: both)");
    cd->add_option("--lambda", dim.lambda, "eigenvalue real parts of D")->delimiter(',');
    cd->add_option("--mult", dim.lambdaMult, "multiplicities for --lambda")->delimiter(',');
    cd->add_option("--a", dim.a, "eigenvalue real parts of E (default 1)")->delimiter(',');
    cd->add_option("--amult", dim.aMult, "multiplicities for --a")->delimiter(',');
    cd->add_option("--E", dim.eFile, "time exponent matrix file");
    cd->add_option("--D", dim.dFile, "value exponent matrix file");
    cd->add_option("--out", dim.outDir, "output directory");

    SimulateOptions sim;
    auto* cm = app.add_subcommand("simulate", "sample self-affine field paths");
    cm->add_option("--model", sim.model, "ofbm | stable-levy")->required();
    cm->add_option("--H", sim.hurst, "Hurst exponent (ofbm scalar)");
    cm->add_option("--D", sim.dFile, "value exponent matrix file (ofbm)");
    cm->add_option("--alpha", sim.alphas, "stability indices (stable-levy)")->delimiter(',');
    cm->add_option("--d", sim.d, "parameter dimension (ofbm: 1 or 2)");
    cm->add_option("--n", sim.n, "lattice points per axis");
    cm->add_option("--replicas", sim.replicas, "replica count");
    cm->add_option("--seed", sim.seed, "seed");
    cm->add_option("--out", sim.outDir, "output directory");

    EstimateOptions est;
    auto* ce = app.add_subcommand("estimate", "empirical fractal estimators");
    ce->add_option("what", est.what, "boxcount | energy | histogram | density")->required();
    ce->add_option("--paths", est.paths, "path CSV files")->delimiter(',');
    ce->add_option("--kind", est.kind, "graph | range");
    ce->add_option("--scale-min", est.scaleMin, "coarsest dyadic exponent");
    ce->add_option("--scale-max", est.scaleMax, "finest dyadic exponent");
    ce->add_option("--gamma", est.gammas, "energy exponents")->delimiter(',');
    ce->add_option("--budget", est.budget, "pair budget (-1: all pairs)");
    ce->add_flag("--scan", est.scan, "energy blow-up scan over lattice refinements");
    ce->add_option("--refinements", est.refinements, "sub-lattice sizes")->delimiter(',');
    ce->add_option("--cells", est.cells, "histogram cells per axis");
    ce->add_option("--lo", est.lo, "histogram lower bound per value axis");
    ce->add_option("--hi", est.hi, "histogram upper bound per value axis");
    ce->add_option("--model", est.model, "density probe model: ofbm | stable-levy");
    ce->add_option("--H", est.hurst, "density probe Hurst exponent");
    ce->add_option("--alpha", est.alphas, "density probe stability index")->delimiter(',');
    ce->add_option("--E", est.eFile, "density probe time exponent matrix file");
    ce->add_option("--D", est.dFile, "density probe value exponent matrix file");
    ce->add_option("--c", est.c, "density probe scale c in (0,1)");
    ce->add_option("--samples", est.samples, "density probe samples per time point");
    ce->add_option("--n", est.n, "density probe lattice points");
    ce->add_option("--seed", est.seed, "sampling seed");
    ce->add_option("--out", est.outDir, "output directory");

    VerifyOptions ver;
    auto* cv = app.add_subcommand("verify", "scaling-law and dimension verification");
    cv->add_option("what", ver.what, "scaling | dimension")->required();
    cv->add_option("--paths", ver.paths, "path CSV files")->required()->delimiter(',');
    cv->add_option("--c", ver.c, "scale c in (0,1)");
    cv->add_option("--H", ver.hurst, "claimed Hurst exponent");
    cv->add_option("--E", ver.eFile, "time exponent matrix file");
    cv->add_option("--D", ver.dFile, "claimed value exponent matrix file");
    cv->add_option("--probes", ver.probeIndices, "probe lattice indices")->delimiter(',');
    cv->add_option("--significance", ver.significance, "suite significance level");
    cv->add_option("--kind", ver.kind, "graph | range (dimension)");
    cv->add_option("--tol", ver.tol, "dimension tolerance");
    cv->add_option("--scale-min", ver.scaleMin, "coarsest dyadic exponent");
    cv->add_option("--scale-max", ver.scaleMax, "finest dyadic exponent");
    cv->add_option("--out", ver.outDir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitDomain;  // --help exits 0, bad flags exit 2
    }

    try {
        if (cs->parsed()) return cmd_sval(sval);
        if (cd->parsed()) return cmd_dim(dim);
        if (cm->parsed()) return cmd_simulate(sim);
        if (ce->parsed()) return cmd_estimate(est);
        if (cv->parsed()) return cmd_verify(ver);
    } catch (const DomainError& e) {
        std::fprintf(stderr, "input/domain error: %s\n", e.what());
        return kExitDomain;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    }
    return kExitOk;
}
