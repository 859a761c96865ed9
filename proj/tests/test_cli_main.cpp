#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kTool = AFFDIM_TOOL_PATH;

int run(const std::string& args) {
    const std::string cmd = kTool + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

double report_value(const std::string& text, const std::string& key) {
    const auto at = text.find(key + " = ");
    REQUIRE(at != std::string::npos);
    return std::stod(text.substr(at + key.size() + 3));
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

struct Workspace {
    fs::path dir;
    explicit Workspace(const std::string& name) : dir(name) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("sval closed forms for the Brownian pair") {
    Workspace ws("cli_sval1");
    write_file(ws.file("e1.txt"), "1\n1\n");
    write_file(ws.file("d05.txt"), "1\n0.5\n");
    const int rc = run("sval --E " + ws.file("e1.txt") + " --D " + ws.file("d05.txt") +
                       " --out " + ws.dir.string());
    CHECK(rc == 0);
    const std::string rep = slurp(ws.file("sval_report.txt"));
    CHECK(report_value(rep, "q") == doctest::Approx(1.0));
    // graph 1.5, range 1
    CHECK(contains(rep, "[graph-closed-form]\ns = 1.5\n"));
    CHECK(contains(rep, "[range-closed-form]\ns = 1\n"));
    CHECK(contains(rep, "case = saturated"));
}

TEST_CASE("sval numeric-only on W with saturation") {
    Workspace ws("cli_sval2");
    write_file(ws.file("w.txt"), "2\n0.6 0\n0 0.6\n");
    const int rc = run("sval --W " + ws.file("w.txt") + " --x 0.36 --out " + ws.dir.string());
    CHECK(rc == 0);
    const std::string rep = slurp(ws.file("sval_report.txt"));
    CHECK(contains(rep, "s = 2\n"));
    CHECK(contains(rep, "case = saturated"));
}

TEST_CASE("sval rotation pair: numeric agrees with the closed form") {
    Workspace ws("cli_sval3");
    write_file(ws.file("e1.txt"), "1\n1\n");
    write_file(ws.file("drot.txt"), "2\n0.6 -0.4\n0.4 0.6\n");
    const int rc = run("sval --E " + ws.file("e1.txt") + " --D " + ws.file("drot.txt") +
                       " --numeric --out " + ws.dir.string());
    CHECK(rc == 0);
    const std::string rep = slurp(ws.file("sval_report.txt"));
    CHECK(std::abs(report_value(rep, "graph_closed_vs_numeric_max_diff")) <= 1e-4);
    CHECK(std::abs(report_value(rep, "graph_c_invariance_spread")) <= 1e-4);
    // closed form 5/3
    const auto at = rep.find("[graph-closed-form]");
    REQUIRE(at != std::string::npos);
    CHECK(std::abs(report_value(rep.substr(at), "s") - 5.0 / 3.0) < 1e-12);
}

TEST_CASE("sval exit codes on bad input") {
    Workspace ws("cli_sval4");
    write_file(ws.file("w.txt"), "2\n0.6 0\n0 0.6\n");
    CHECK(run("sval --W " + ws.file("missing.txt") + " --x 0.5") == 2);
    CHECK(run("sval --W " + ws.file("w.txt") + " --x 1.5") == 2);
    write_file(ws.file("noncontract.txt"), "1\n1.5\n");
    CHECK(run("sval --W " + ws.file("noncontract.txt") + " --x 0.5") == 2);
}

TEST_CASE("dim levy family values") {
    Workspace ws("cli_dim1");
    CHECK(run("dim --family levy --lambda 0.5 --out " + ws.dir.string()) == 0);
    std::string rep = slurp(ws.file("dim_report.txt"));
    {
        const auto g = rep.find("[levy-graph]");
        const auto r = rep.find("[levy-range]");
        REQUIRE(g != std::string::npos);
        REQUIRE(r != std::string::npos);
        CHECK(report_value(rep.substr(g), "value") == doctest::Approx(1.5));
        CHECK(report_value(rep.substr(r), "value") == doctest::Approx(1.0));
    }

    CHECK(run("dim --family levy --lambda 0.5 --mult 2 --out " + ws.dir.string()) == 0);
    rep = slurp(ws.file("dim_report.txt"));
    {
        const auto g = rep.find("[levy-graph]");
        const auto r = rep.find("[levy-range]");
        CHECK(report_value(rep.substr(g), "value") == doctest::Approx(2.0));
        CHECK(report_value(rep.substr(r), "value") == doctest::Approx(2.0));
    }
}

TEST_CASE("dim from exponent matrix files") {
    Workspace ws("cli_dim3");
    write_file(ws.file("e1.txt"), "1\n1\n");
    write_file(ws.file("d05.txt"), "1\n0.5\n");
    CHECK(run("dim --E " + ws.file("e1.txt") + " --D " + ws.file("d05.txt") + " --out " +
              ws.dir.string()) == 0);
    const std::string rep = slurp(ws.file("dim_report.txt"));
    const auto g = rep.find("[levy-graph]");
    REQUIRE(g != std::string::npos);
    CHECK(report_value(rep.substr(g), "value") == doctest::Approx(1.5));
    CHECK(contains(rep, "all_pass = true"));
}

TEST_CASE("dim oss-stable family values") {
    Workspace ws("cli_dim2");
    CHECK(run("dim --family oss-stable --a 1.5,2 --lambda 0.5,0.7 --out " + ws.dir.string()) ==
          0);
    const std::string rep = slurp(ws.file("dim_report.txt"));
    const auto g = rep.find("[oss-stable-graph]");
    const auto r = rep.find("[oss-stable-range]");
    REQUIRE(g != std::string::npos);
    REQUIRE(r != std::string::npos);
    CHECK(report_value(rep.substr(g), "value") == doctest::Approx(3.4));
    CHECK(report_value(rep.substr(r), "value") == doctest::Approx(2.0));
    CHECK(contains(rep, "all_pass = true"));
}

TEST_CASE("simulate then estimate pipeline") {
    Workspace ws("cli_pipe");
    CHECK(run("simulate --model ofbm --H 0.5 --n 4096 --replicas 2 --seed 7 --out " +
              ws.dir.string()) == 0);
    CHECK(fs::exists(ws.file("path_0000.csv")));
    CHECK(fs::exists(ws.file("path_0001.meta")));

    const std::string paths = ws.file("path_0000.csv") + "," + ws.file("path_0001.csv");
    CHECK(run("estimate boxcount --kind graph --paths " + paths + " --scale-max 10 --out " +
              ws.dir.string()) == 0);
    const std::string rep = slurp(ws.file("boxcount_report.txt"));
    const double slope = report_value(rep, "mean_slope");
    CHECK(slope > 1.0);
    CHECK(slope < 2.0);

    // gamma = 0 energy is exactly one
    CHECK(run("estimate energy --kind graph --paths " + paths +
              " --gamma 0,0.5 --budget 20000 --out " + ws.dir.string()) == 0);
    const std::string csv = slurp(ws.file("energy.csv"));
    CHECK(contains(csv, "0,1,0"));

    CHECK(run("estimate histogram --kind range --paths " + ws.file("path_0000.csv") +
              " --cells 16 --lo -3 --hi 3 --out " + ws.dir.string()) == 0);
    const std::string hrep = slurp(ws.file("histogram_report.txt"));
    CHECK(report_value(hrep, "total_mass") + report_value(hrep, "overflow_mass") ==
          doctest::Approx(1.0).epsilon(1e-15));

    // blow-up scan over sub-lattice refinements
    CHECK(run("estimate energy --kind graph --paths " + paths +
              " --gamma 0.5,1.2,1.8 --scan --refinements 512,1024,2048,4096 --out " +
              ws.dir.string()) == 0);
    const std::string scan = slurp(ws.file("energy_scan.csv"));
    CHECK(contains(scan, "gamma"));
    CHECK(contains(scan, "divergent"));
    const std::string erep = slurp(ws.file("energy_report.txt"));
    // gamma = 1.8 sits above the graph dimension 1.5 and must be flagged
    const double firstDiv = report_value(erep, "first_divergent_gamma");
    CHECK(firstDiv > 0.5);
    CHECK(firstDiv <= 1.8);

    // closed-form vs empirical comparison: generous tolerance passes, a
    // one-in-a-thousand tolerance breaches with exit code 4
    CHECK(run("verify dimension --kind graph --H 0.5 --tol 0.4 --scale-max 10 --paths " + paths +
              " --out " + ws.dir.string()) == 0);
    const std::string drep = slurp(ws.file("dimension_report.txt"));
    CHECK(report_value(drep, "closed_form") == doctest::Approx(1.5));
    CHECK(run("verify dimension --kind graph --H 0.5 --tol 0.001 --scale-max 10 --paths " +
              paths + " --out " + ws.dir.string()) == 4);
}

TEST_CASE("verify scaling passes for the true law and fails for a perturbed one") {
    Workspace ws("cli_verify");
    CHECK(run("simulate --model ofbm --H 0.5 --n 256 --replicas 400 --seed 11 --out " +
              ws.dir.string()) == 0);
    std::string paths = ws.file("path_0000.csv");
    for (int i = 1; i < 400; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "path_%04d.csv", i);
        paths += "," + ws.file(name);
    }
    CHECK(run("verify scaling --c 0.5 --H 0.5 --paths " + paths + " --out " + ws.dir.string()) ==
          0);
    const std::string rep = slurp(ws.file("scaling_report.txt"));
    CHECK(contains(rep, "pass = true"));

    // a claim off by 0.4 separates cleanly at a deep scale
    CHECK(run("verify scaling --c 0.0625 --H 0.9 --paths " + paths + " --out " +
              ws.dir.string()) == 4);
}

TEST_CASE("estimate density probes the annulus maximum") {
    Workspace ws("cli_density");
    CHECK(run("estimate density --model ofbm --H 0.5 --c 0.5 --samples 6000 --n 64 --out " +
              ws.dir.string()) == 0);
    const std::string rep = slurp(ws.file("density_report.txt"));
    CHECK(contains(rep, "unbounded_flag = false"));
    // Gaussian marginal: sup over the annulus is pi^{-1/2} ~= 0.564
    CHECK(std::abs(report_value(rep, "sup_density") - 0.5642) < 0.12);
    CHECK(fs::exists(ws.file("density.csv")));
}

TEST_CASE("config file provides defaults and flags win") {
    Workspace ws("cli_config");
    write_file(ws.file("e1.txt"), "1\n1\n");
    write_file(ws.file("d05.txt"), "1\n0.5\n");
    write_file(ws.file("d23.txt"), "1\n0.66666666666666663\n");
    write_file(ws.file("run.ini"), "[sval]\nE = " + ws.file("e1.txt") + "\nD = " +
                                       ws.file("d05.txt") + "\nout = " + ws.dir.string() + "\n");

    CHECK(run("--config " + ws.file("run.ini") + " sval") == 0);
    std::string rep = slurp(ws.file("sval_report.txt"));
    CHECK(contains(rep, "[graph-closed-form]\ns = 1.5\n"));

    // the command line overrides the config value of --D
    CHECK(run("--config " + ws.file("run.ini") + " sval --D " + ws.file("d23.txt")) == 0);
    rep = slurp(ws.file("sval_report.txt"));
    CHECK(contains(rep, "s = 1.3333333333333"));
}

TEST_CASE("reports are byte-identical across reruns and worker counts") {
    Workspace a("cli_det_a"), b("cli_det_b");
    setenv("AFFDIM_THREADS", "1", 1);
    CHECK(run("simulate --model stable-levy --alpha 1.5,2 --n 2048 --replicas 3 --seed 5 --out " +
              a.dir.string()) == 0);
    setenv("AFFDIM_THREADS", "3", 1);
    CHECK(run("simulate --model stable-levy --alpha 1.5,2 --n 2048 --replicas 3 --seed 5 --out " +
              b.dir.string()) == 0);
    unsetenv("AFFDIM_THREADS");
    for (int i = 0; i < 3; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "path_%04d.csv", i);
        CHECK(slurp(a.file(name)) == slurp(b.file(name)));
    }

    CHECK(run("estimate boxcount --kind range --paths " + a.file("path_0000.csv") +
              " --scale-max 9 --out " + a.dir.string()) == 0);
    CHECK(run("estimate boxcount --kind range --paths " + b.file("path_0000.csv") +
              " --scale-max 9 --out " + b.dir.string()) == 0);
    CHECK(slurp(a.file("boxcount_report.txt")) == slurp(b.file("boxcount_report.txt")));
    CHECK(slurp(a.file("boxcount.csv")) == slurp(b.file("boxcount.csv")));
}
