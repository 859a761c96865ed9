#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace affdim::cli {

// exit codes: 0 success, 2 input/domain, 3 numeric, 4 tolerance breach
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitTolerance = 4;

struct SvalOptions {
    std::string eFile, dFile, wFile;
    double x = -1.0;
    double c = -1.0;  // unspecified: closed forms plus c-invariance sweep
    bool numeric = false;
    double tol = 1e-6;
    std::string outDir = ".";
};

struct DimOptions {
    std::string family;  // "levy" | "oss-stable" | "" (everything)
    std::vector<double> lambda, a;
    std::vector<int> lambdaMult, aMult;
    std::string eFile, dFile;
    std::string outDir = ".";
};

struct SimulateOptions {
    std::string model = "ofbm";
    double hurst = -1.0;
    std::string dFile;
    std::vector<double> alphas;
    int d = 1;
    int n = 1024;
    long replicas = 1;
    std::uint64_t seed = 1;
    std::string outDir = ".";
};

struct EstimateOptions {
    std::string what;  // boxcount | energy | histogram | density
    std::vector<std::string> paths;
    std::string kind = "graph";
    int scaleMin = 2, scaleMax = 12;
    std::vector<double> gammas;
    long budget = -1;
    bool scan = false;
    std::vector<long> refinements;
    int cells = 32;
    double lo = -3.0, hi = 3.0;
    // density probe: simulates its own marginal samples
    std::string model = "ofbm";
    double hurst = -1.0;
    std::vector<double> alphas;
    std::string eFile, dFile;
    double c = 0.5;
    long samples = 20000;
    int n = 128;
    std::uint64_t seed = 1;
    std::string outDir = ".";
};

struct VerifyOptions {
    std::string what;  // scaling | dimension
    std::vector<std::string> paths;
    double c = 0.5;
    double hurst = -1.0;
    std::string eFile, dFile;
    std::vector<long> probeIndices;
    double significance = 0.01;
    std::string kind = "graph";
    double tol = 0.15;
    int scaleMin = 2, scaleMax = 12;
    std::string outDir = ".";
};

int cmd_sval(const SvalOptions& opt);
int cmd_dim(const DimOptions& opt);
int cmd_simulate(const SimulateOptions& opt);
int cmd_estimate(const EstimateOptions& opt);
int cmd_verify(const VerifyOptions& opt);

}  // namespace affdim::cli
