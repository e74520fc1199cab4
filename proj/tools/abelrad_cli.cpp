// Command line front end: simulate / reconstruct / invert-abel /
// sweep-lambda / selftest. Exit codes: 0 success, 1 usage error,
// 2 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "abelrad/abel.hpp"
#include "abelrad/forward.hpp"
#include "abelrad/io.hpp"
#include "abelrad/kernels.hpp"
#include "abelrad/manifest.hpp"
#include "abelrad/phantom.hpp"
#include "abelrad/selftest.hpp"
#include "abelrad/solvers.hpp"
#include "abelrad/spectral.hpp"

namespace fs = std::filesystem;
using namespace abelrad;

namespace {

struct CommonArgs {
    std::string manifest_path;
    std::vector<std::string> overrides;  // key=value
};

ExperimentManifest resolve_manifest(const CommonArgs& args) {
    std::map<std::string, std::string> kv;
    if (!args.manifest_path.empty()) {
        std::ifstream in(args.manifest_path);
        if (!in) throw CLI::ValidationError("--manifest", "cannot open " + args.manifest_path);
        std::stringstream ss;
        ss << in.rdbuf();
        kv = parse_key_value_text(ss.str());
    } else {
        kv = ExperimentManifest::table_defaults().to_map();
    }
    for (const auto& ov : args.overrides) {
        auto extra = parse_key_value_text(ov);
        for (const auto& [k, v] : extra) kv[k] = v;
    }
    return ExperimentManifest::from_map(kv);
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--manifest", args.manifest_path, "experiment manifest file");
    cmd->add_option("--set", args.overrides, "override a manifest key (key=value), repeatable");
}

struct SimOutputs {
    Image phantom;
    Sinogram clean;
    Sinogram noisy;
};

SimOutputs run_simulation(const ExperimentManifest& man, const SparseOperator& A) {
    SimOutputs out{make_phantom(man.phantom), {}, {}};
    const int m = man.phantom.m;
    auto A_eps = perturb_matrix(A, man.noise.epsilon, man.noise.seed);
    auto clean_vec = sparse_apply(A, out.phantom.values);
    auto noisy_vec = simulate_data(A_eps, out.phantom, man.noise);
    out.clean = vector_to_sinogram(clean_vec, default_p_axis(m), default_y_axis(m), man.curve.j,
                                   man.curve.s);
    out.noisy = vector_to_sinogram(noisy_vec, default_p_axis(m), default_y_axis(m), man.curve.j,
                                   man.curve.s);
    return out;
}

SparseOperator build_experiment_matrix(const ExperimentManifest& man) {
    const int m = man.phantom.m;
    return build_forward_matrix(man.curve, ImageGrid(m), default_p_axis(m), default_y_axis(m),
                                /*two_sided=*/true);
}

int cmd_simulate(const CommonArgs& args, const std::string& cache_matrix) {
    ExperimentManifest man = resolve_manifest(args);
    fs::create_directories(man.output_dir);
    std::printf("simulate: m=%d curve=%s gamma=%g eps=%g\n", man.phantom.m,
                man.curve.kind == CurveSpec::Kind::hyperbola ? "hyperbola" : "ellipse",
                man.noise.gamma, man.noise.epsilon);
    auto A = build_experiment_matrix(man);
    auto sim = run_simulation(man, A);
    const std::string dir = man.output_dir + "/";
    write_image_csv(dir + "phantom.csv", sim.phantom);
    write_pgm(dir + "phantom.pgm", sim.phantom);
    write_sinogram_csv(dir + "sinogram_clean.csv", sim.clean);
    write_sinogram_csv(dir + "data.csv", sim.noisy);
    man.save(dir + "manifest.txt");
    if (!cache_matrix.empty()) write_matrix_bin(cache_matrix, A);
    std::printf("simulate: wrote %sphantom.csv, sinogram_clean.csv, data.csv, manifest.txt\n",
                dir.c_str());
    return 0;
}

double reconstruct_once(const ExperimentManifest& man, const SparseOperator& A,
                        const Sinogram& data, const Image& truth, Image& recon,
                        std::vector<IterationRecord>& log, std::string& flags) {
    const int m = man.phantom.m;
    recon = Image{ImageGrid(m)};
    if (man.method == "spectral") {
        double a = man.band_a > 0.0 ? man.band_a : 1.0;
        double b = man.band_b > 0.0 ? man.band_b : default_p_axis(m).hi;
        SpectralOptions opts;
        auto res = invert_R2d(data, SupportBand{a, b}, opts);
        recon = res.image;
        flags = res.warnings.empty() ? "" : (std::to_string(res.warnings.size()) + " frequencies zeroed");
    } else {
        ReconConfig cfg = man.recon;
        SolveResult sol;
        if (man.method == "tv") {
            cfg.nonneg = true;
            sol = tv_reconstruct(A, data.values, m, cfg);
        } else {
            sol = cgls_tikhonov(A, data.values, cfg);
        }
        recon.values = sol.x;
        log = sol.log;
        if (sol.breakdown) flags = "breakdown";
        if (sol.line_search_failure) flags += (flags.empty() ? "" : ",") + std::string("line_search_failure");
    }
    return delta_error(recon, truth);
}

int cmd_reconstruct(const CommonArgs& args) {
    ExperimentManifest man = resolve_manifest(args);
    fs::create_directories(man.output_dir);
    const std::string dir = man.output_dir + "/";

    auto A = build_experiment_matrix(man);
    Sinogram data;
    Image truth;
    if (fs::exists(dir + "data.csv") && fs::exists(dir + "phantom.csv")) {
        data = read_sinogram_csv(dir + "data.csv");
        truth = read_image_csv(dir + "phantom.csv");
    } else {
        std::printf("reconstruct: no simulated data in %s, simulating inline\n", dir.c_str());
        auto sim = run_simulation(man, A);
        data = sim.noisy;
        truth = sim.phantom;
        write_image_csv(dir + "phantom.csv", truth);
        write_sinogram_csv(dir + "sinogram_clean.csv", sim.clean);
        write_sinogram_csv(dir + "data.csv", data);
        man.save(dir + "manifest.txt");
    }

    Image recon;
    std::vector<IterationRecord> log;
    std::string flags;
    const auto t0 = std::chrono::steady_clock::now();
    double delta = reconstruct_once(man, A, data, truth, recon, log, flags);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_image_csv(dir + "recon.csv", recon);
    write_pgm(dir + "recon.pgm", recon);
    {
        std::ofstream metrics(dir + "metrics.csv");
        metrics << "method,delta,iterations,runtime_seconds,flags\n";
        metrics << man.method << "," << delta << "," << log.size() << "," << secs << "," << flags
                << "\n";
    }
    {
        std::ofstream it(dir + "iterations.csv");
        it << "iter,objective,residual,step\n";
        for (const auto& rec : log)
            it << rec.iter << "," << rec.objective << "," << rec.residual << "," << rec.step
               << "\n";
    }
    man.save(dir + "manifest.txt");
    std::printf("reconstruct: method=%s delta=%.4f iters=%zu runtime=%.1fs %s\n",
                man.method.c_str(), delta, log.size(), secs, flags.c_str());
    return 0;
}

int cmd_sweep_lambda(const CommonArgs& args, int points, double lo_exp, double hi_exp) {
    ExperimentManifest man = resolve_manifest(args);
    fs::create_directories(man.output_dir);
    const std::string dir = man.output_dir + "/";
    auto A = build_experiment_matrix(man);
    auto sim = run_simulation(man, A);
    write_image_csv(dir + "phantom.csv", sim.phantom);
    write_sinogram_csv(dir + "data.csv", sim.noisy);
    man.save(dir + "manifest.txt");

    std::ofstream sweep(dir + "sweep.csv");
    sweep << "lambda,delta,iterations\n";
    double best_delta = 1e300, best_lambda = 0.0;
    for (int k = 0; k < points; ++k) {
        ExperimentManifest cur = man;
        cur.recon.lambda = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * k / (points - 1));
        Image recon;
        std::vector<IterationRecord> log;
        std::string flags;
        double delta = reconstruct_once(cur, A, sim.noisy, sim.phantom, recon, log, flags);
        sweep << cur.recon.lambda << "," << delta << "," << log.size() << "\n";
        std::printf("sweep: lambda=%.4g delta=%.4f\n", cur.recon.lambda, delta);
        if (delta < best_delta) {
            best_delta = delta;
            best_lambda = cur.recon.lambda;
        }
    }
    std::printf("sweep: best lambda=%.4g delta=%.4f (wrote %ssweep.csv)\n", best_lambda,
                best_delta, dir.c_str());
    return 0;
}

int cmd_invert_abel(const std::string& family, double alpha, int j, double s, double xi, int l,
                    int n, double sar_h, double sar_d, const std::string& data_path,
                    double grid_lo, double grid_hi, const std::string& out_path) {
    if (!(alpha > -1.0)) throw CLI::ValidationError("--alpha", "requires alpha > -1");

    AbelKernelSpec spec;
    if (family == "constant" || family == "sqrt-sum" || family == "linear-sum") {
        spec.j = j;
        spec.m_int = int(std::ceil(alpha - 1e-12));
        if (spec.m_int < 0) spec.m_int = 0;
        spec.beta = spec.m_int - alpha;
        if (family == "constant") {
            spec.kernel = [](double, double) { return 1.0; };
            spec.kernel_dp = {[](double, double) { return 0.0; },
                              [](double, double) { return 0.0; },
                              [](double, double) { return 0.0; }};
        } else if (family == "sqrt-sum") {
            spec.kernel = [](double p, double w) { return std::sqrt(p + w); };
            spec.kernel_dp = {[](double p, double w) { return 0.5 / std::sqrt(p + w); },
                              [](double p, double w) { return -0.25 * std::pow(p + w, -1.5); },
                              [](double p, double w) { return 0.375 * std::pow(p + w, -2.5); }};
        } else {
            spec.kernel = [](double p, double w) { return p + w; };
            spec.kernel_dp = {[](double, double) { return 1.0; },
                              [](double, double) { return 0.0; },
                              [](double, double) { return 0.0; }};
        }
    } else if (family == "ellipse2d") {
        spec = ellipse2d_spec(j, s, xi);
    } else if (family == "surface-nd") {
        spec = surface_nd_spec(j, s, xi, n);
    } else if (family == "sar") {
        GeneralizedCurve c;
        c.q = 1;
        c.nu = [sar_h, sar_d](double p, double w) {
            return std::sqrt(p + w) *
                   std::sqrt((p * p + sar_h * sar_h) / (p * p + sar_h * sar_h + sar_d * sar_d));
        };
        spec = generalized_kernel(c, n, xi);
    } else if (family == "spherical-means") {
        spec = spherical_means_spec(l, n);
    } else {
        throw CLI::ValidationError("--family", "unknown family " + family);
    }

    auto g = read_profile_csv(data_path);
    Grid1D grid{grid_lo, grid_hi, int(g.size())};

    auto report = validate_kernel(spec, grid);
    std::fputs(report.to_text().c_str(), stdout);
    if (!report.pass) {
        std::fprintf(stderr, "invert-abel: kernel validation failed\n");
        return 2;
    }

    AbelSolveOptions opts;
    auto f = abel_solve(spec, g, grid, opts);
    write_profile_csv(out_path, f);

    // residual report: forward-applied solution against the input data
    auto g_back = abel_forward_apply(spec, f, grid);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        num += (g_back[i] - g[i]) * (g_back[i] - g[i]);
        den += g[i] * g[i];
    }
    const double resid = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    std::printf("invert-abel: wrote %s, forward residual (rel L2) = %.3e\n", out_path.c_str(),
                resid);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized Abel / curve-transform reconstruction toolkit"};
    app.require_subcommand(1);

    CommonArgs sim_args, rec_args, sweep_args;
    std::string cache_matrix;
    auto* sim = app.add_subcommand("simulate", "phantom + curve data simulation");
    add_common(sim, sim_args);
    sim->add_option("--cache-matrix", cache_matrix, "also write the system matrix (binary)");

    auto* rec = app.add_subcommand("reconstruct", "reconstruct from simulated data");
    add_common(rec, rec_args);

    auto* sweep = app.add_subcommand("sweep-lambda", "log-spaced regularization sweep");
    add_common(sweep, sweep_args);
    int sweep_points = 13;
    double sweep_lo = -4.0, sweep_hi = 2.0;
    sweep->add_option("--points", sweep_points, "sweep points (default 13)");
    sweep->add_option("--lo-exp", sweep_lo, "log10 of the smallest lambda");
    sweep->add_option("--hi-exp", sweep_hi, "log10 of the largest lambda");

    auto* inv = app.add_subcommand("invert-abel", "solve a 1-D generalized Abel equation");
    std::string family = "constant", data_path, out_path = "solution.csv";
    double alpha = -0.5, s = 2.0, xi = 0.0, sar_h = 5.0, sar_d = 2.0;
    double grid_lo = 0.0, grid_hi = 1.0;
    int j = 0, l = 0, n = 2;
    inv->add_option("--family", family,
                    "constant | sqrt-sum | linear-sum | ellipse2d | surface-nd | sar | spherical-means");
    inv->add_option("--alpha", alpha, "exponent alpha > -1 (basic families)");
    inv->add_option("--j", j, "orientation 0|1")->check(CLI::Range(0, 1));
    inv->add_option("--s", s, "shape constant");
    inv->add_option("--xi", xi, "frequency");
    inv->add_option("--l", l, "Gegenbauer degree");
    inv->add_option("--n", n, "dimension");
    inv->add_option("--sar-h", sar_h, "platform height (sar family)");
    inv->add_option("--sar-d", sar_d, "platform distance (sar family)");
    inv->add_option("--data", data_path, "profile CSV with g on the grid")->required();
    inv->add_option("--grid-lo", grid_lo, "grid lower endpoint")->required();
    inv->add_option("--grid-hi", grid_hi, "grid upper endpoint")->required();
    inv->add_option("--out", out_path, "output profile CSV");

    auto* st = app.add_subcommand("selftest", "run the invariant suite");
    bool inject = false;
    st->add_flag("--inject-adjoint-bug", inject,
                 "test fixture: corrupt the adjoint check to verify suite sensitivity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // help/version exit 0, any parse problem is a usage error
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_args, cache_matrix);
        if (rec->parsed()) return cmd_reconstruct(rec_args);
        if (sweep->parsed()) return cmd_sweep_lambda(sweep_args, sweep_points, sweep_lo, sweep_hi);
        if (inv->parsed())
            return cmd_invert_abel(family, alpha, j, s, xi, l, n, sar_h, sar_d, data_path,
                                   grid_lo, grid_hi, out_path);
        if (st->parsed()) {
            SelftestReport report = run_selftest({inject});
            std::fputs(report.to_table().c_str(), stdout);
            return report.all_pass() ? 0 : 2;
        }
    } catch (const CLI::Error& e) {
        app.exit(e);
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
    return 1;
}
