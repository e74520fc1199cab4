#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "abelrad/io.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cli selftest passes on a fresh build and reports injected faults") {
    CHECK(run("selftest") == 0);
    CHECK(run("selftest --inject-adjoint-bug") != 0);
    // identical report on repeated runs
    std::system((std::string(CLI_BINARY_PATH) + " selftest > /tmp/abelrad_st1.txt 2>&1").c_str());
    std::system((std::string(CLI_BINARY_PATH) + " selftest > /tmp/abelrad_st2.txt 2>&1").c_str());
    CHECK(slurp("/tmp/abelrad_st1.txt") == slurp("/tmp/abelrad_st2.txt"));
}

TEST_CASE("cli invert-abel solves the classical equation") {
    // g(p) = (4/3) p^{3/2} corresponds to f(w) = w for the alpha = -1/2 kernel
    const int n = 257;
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        double p = double(i) / (n - 1);
        g[i] = (4.0 / 3.0) * std::pow(p, 1.5);
    }
    abelrad::write_profile_csv("/tmp/abelrad_cli_g.csv", g);
    CHECK(run("invert-abel --family constant --alpha -0.5 --j 0 --data /tmp/abelrad_cli_g.csv "
              "--grid-lo 0 --grid-hi 1 --out /tmp/abelrad_cli_f.csv") == 0);
    auto f = abelrad::read_profile_csv("/tmp/abelrad_cli_f.csv");
    REQUIRE(int(f.size()) == n);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        double want = double(i) / (n - 1);
        num += (f[i] - want) * (f[i] - want);
        den += want * want;
    }
    CHECK(std::sqrt(num / den) <= 2e-2);
}

TEST_CASE("cli invert-abel rejects alpha <= -1 as a usage error") {
    CHECK(run("invert-abel --family constant --alpha -1 --data /tmp/abelrad_cli_g.csv "
              "--grid-lo 0 --grid-hi 1") == 1);
}

TEST_CASE("cli invert-abel validates the SAR kernel") {
    // any smooth data will do; the point is the validation log and exit 0
    std::vector<double> g(129);
    for (int i = 0; i < 129; ++i) {
        double p = 1.0 + 2.0 * i / 128.0;
        g[i] = std::pow(p - 1.0, 1.5) * (1.0 + 0.2 * p);
    }
    abelrad::write_profile_csv("/tmp/abelrad_cli_sar.csv", g);
    int rc = std::system((std::string(CLI_BINARY_PATH) +
                          " invert-abel --family sar --sar-h 5 --sar-d 2 --xi 1 --n 2"
                          " --data /tmp/abelrad_cli_sar.csv --grid-lo 1 --grid-hi 3"
                          " --out /tmp/abelrad_cli_sar_f.csv > /tmp/abelrad_sar_log.txt 2>&1")
                             .c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(slurp("/tmp/abelrad_sar_log.txt").find("PASS") != std::string::npos);
}

TEST_CASE("cli simulate and reconstruct run a small deterministic experiment") {
    const std::string dir = "/tmp/abelrad_cli_exp";
    fs::remove_all(dir);
    const std::string overrides =
        " --set phantom.m=33 --set output_dir=" + dir +
        " --set recon.max_iters=30 --set recon.lambda=0.01 --set noise.gamma=0.01";
    CHECK(run("simulate" + overrides) == 0);
    CHECK(fs::exists(dir + "/phantom.csv"));
    CHECK(fs::exists(dir + "/sinogram_clean.csv"));
    CHECK(fs::exists(dir + "/data.csv"));
    CHECK(fs::exists(dir + "/manifest.txt"));

    // determinism: identical files on a re-run
    const std::string data1 = slurp(dir + "/data.csv");
    CHECK(run("simulate" + overrides) == 0);
    CHECK(slurp(dir + "/data.csv") == data1);

    CHECK(run("reconstruct" + overrides) == 0);
    CHECK(fs::exists(dir + "/recon.csv"));
    CHECK(fs::exists(dir + "/recon.pgm"));
    CHECK(fs::exists(dir + "/metrics.csv"));
    CHECK(fs::exists(dir + "/iterations.csv"));
    const std::string metrics = slurp(dir + "/metrics.csv");
    CHECK(metrics.find("cgls") != std::string::npos);
}

TEST_CASE("cli simulate with zero noise keeps data equal to the clean sinogram") {
    const std::string dir = "/tmp/abelrad_cli_clean";
    fs::remove_all(dir);
    CHECK(run("simulate --set phantom.m=33 --set noise.gamma=0 --set noise.epsilon=0"
              " --set output_dir=" + dir) == 0);
    CHECK(slurp(dir + "/data.csv") == slurp(dir + "/sinogram_clean.csv"));
}

TEST_CASE("cli sweep-lambda writes the sweep table") {
    const std::string dir = "/tmp/abelrad_cli_sweep";
    fs::remove_all(dir);
    CHECK(run("sweep-lambda --points 3 --lo-exp -2 --hi-exp 0 --set phantom.m=33"
              " --set recon.max_iters=20 --set output_dir=" + dir) == 0);
    const std::string sweep = slurp(dir + "/sweep.csv");
    CHECK(sweep.find("lambda,delta,iterations") != std::string::npos);
    // header + 3 sweep lines
    CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 4);
}

TEST_CASE("cli rejects unknown manifest keys gracefully") {
    CHECK(run("reconstruct --set method=nonsense --set phantom.m=33") == 1);
}
