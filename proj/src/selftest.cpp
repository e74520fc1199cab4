#include "abelrad/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "abelrad/abel.hpp"
#include "abelrad/forward.hpp"
#include "abelrad/kernels.hpp"
#include "abelrad/phantom.hpp"
#include "abelrad/rng.hpp"
#include "abelrad/solvers.hpp"
#include "abelrad/types.hpp"

namespace abelrad {

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

double rel_l2(const std::vector<double>& got, const std::vector<double>& want) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < got.size(); ++i) {
        num += (got[i] - want[i]) * (got[i] - want[i]);
        den += want[i] * want[i];
    }
    return std::sqrt(num / den);
}

std::string fmt_err(double err, double tol) {
    std::ostringstream os;
    os << "worst " << err << " (tol " << tol << ")";
    return os.str();
}

}  // namespace

bool SelftestReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string SelftestReport::to_table() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  --  " << c.detail << "\n";
    os << (all_pass() ? "selftest: all checks passed\n" : "selftest: FAILURES present\n");
    return os.str();
}

SelftestReport run_selftest(const SelftestOptions& opts) {
    SelftestReport report;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        report.checks.push_back({name, pass, detail});
    };

    // adjoint identity on small random operators
    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            CounterRng rng(500 + trial);
            SparseOperator A(9, 13);
            for (int r = 0; r < 9; ++r) {
                for (int c = 0; c < 13; ++c)
                    if (rng.next_unit() < 0.4) {
                        A.col_indices.push_back(c);
                        A.weights.push_back(rng.next_uniform(-1.0, 1.0));
                    }
                A.row_offsets[r + 1] = A.col_indices.size();
            }
            std::vector<double> x(13), y(9);
            for (auto& v : x) v = rng.next_uniform(-1.0, 1.0);
            for (auto& v : y) v = rng.next_uniform(-1.0, 1.0);
            auto Ax = sparse_apply(A, x);
            auto Aty = sparse_apply_adjoint(A, y);
            double lhs = 0.0, rhs = 0.0;
            for (int i = 0; i < 9; ++i) lhs += Ax[i] * y[i];
            for (int i = 0; i < 13; ++i) rhs += x[i] * Aty[i];
            if (opts.inject_adjoint_fault) rhs = -rhs;
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        }
        add("adjoint identity <Ax,y> = <x,A'y>", worst <= 1e-12, fmt_err(worst, 1e-12));
    }

    // null space of the two-sided operator: odd images map to ~0
    {
        const int m = 33;
        ImageGrid grid(m);
        CurveSpec c;
        c.kind = CurveSpec::Kind::ellipse;
        c.s = 2.0;
        auto A = build_forward_matrix(c, grid, default_p_axis(m), default_y_axis(m), true);
        const double An = sparse_norm_estimate(A, 15);
        double worst = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            CounterRng rng(42 + trial);
            Image img{grid};
            for (int r = 0; r < m / 2; ++r)
                for (int cc = 0; cc < m; ++cc) {
                    double v = rng.next_uniform(-1.0, 1.0);
                    img.at(r, cc) = v;
                    img.at(m - 1 - r, cc) = -v;
                }
            auto y = sparse_apply(A, img.values);
            double ny = 0.0, nx = 0.0;
            for (double v : y) ny += v * v;
            for (double v : img.values) nx += v * v;
            worst = std::max(worst, std::sqrt(ny) / (An * std::sqrt(nx)));
        }
        add("two-sided operator annihilates odd images", worst <= 1e-10, fmt_err(worst, 1e-10));
    }

    // diagonal identities of the kernel families
    {
        CounterRng rng(7);
        double worst = 0.0;
        for (int t = 0; t < 25; ++t) {
            double s = rng.next_uniform(0.5, 3.0), xi = rng.next_uniform(0.0, 4.0);
            double p = rng.next_uniform(0.3, 2.0);
            worst = std::max(worst, rel_err(kernel_2d_factored(t % 2, s, xi, p, p),
                                            std::sqrt(0.5 * s * p)));
            for (int n : {3, 4, 5}) {
                auto f = kernel_nd(t % 2, s, xi, n, p, p);
                const double alpha = 0.5 * (n - 3);
                const double area =
                    2.0 * std::pow(M_PI, 0.5 * (n - 1)) / std::exp(std::lgamma(0.5 * (n - 1)));
                worst = std::max(worst, rel_err(f.K1 * f.K2 * f.K3,
                                                std::pow(2.0, alpha) * area * std::sqrt(s) *
                                                    std::pow(p, alpha + 1.0)));
            }
        }
        add("kernel diagonal identities (2-D and nD)", worst <= 1e-8, fmt_err(worst, 1e-8));
    }

    // L_beta diagonal matches pi K(r,r) / sin(pi beta)
    {
        AbelKernelSpec s;
        s.j = 0;
        s.m_int = 0;
        s.beta = 0.4;
        s.kernel = [](double p, double w) { return std::sqrt(p + w); };
        CounterRng rng(17);
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            double r = rng.next_uniform(0.5, 1.5);
            worst = std::max(worst, rel_err(L_beta_eval(s, r, r), c_beta_diag(s, r)));
        }
        add("L_beta(r,r) = pi K(r,r)/sin(pi beta)", worst <= 1e-8, fmt_err(worst, 1e-8));
    }

    // coefficient oracle against difference quotients of H_alpha
    {
        double worst = 0.0;
        const double w = 1.0, alpha = 1.5;
        auto K = [](double p) { return std::exp(0.25 * p); };
        auto H = [&](double p) { return std::pow(p - w, alpha) * K(p); };
        const double p = 1.9;
        for (int k = 1; k <= 3; ++k) {
            auto c = leibniz_coeffs(alpha, 0, k);
            double sum = 0.0;
            for (int i = 0; i <= k; ++i)
                sum += c[i] * std::pow(p - w, alpha - (k - i)) * std::pow(0.25, i) * K(p);
            const double h = 1e-2;
            double fd;
            if (k == 1)
                fd = (H(p + h) - H(p - h)) / (2 * h);
            else if (k == 2)
                fd = (H(p + h) - 2 * H(p) + H(p - h)) / (h * h);
            else
                fd = (H(p + 2 * h) - 2 * H(p + h) + 2 * H(p - h) - H(p - 2 * h)) / (2 * h * h * h);
            worst = std::max(worst, rel_err(sum, fd));
        }
        add("derivative coefficients vs difference quotients", worst <= 1e-3,
            fmt_err(worst, 1e-3));
    }

    // forward/solve round trip
    {
        Grid1D grid{0.5, 1.5, 129};
        AbelKernelSpec s;
        s.j = 0;
        s.m_int = 1;
        s.beta = 0.5;
        s.kernel = [](double p, double w) { return std::sqrt(p + w); };
        s.kernel_dp = {[](double p, double w) { return 0.5 / std::sqrt(p + w); },
                       [](double p, double w) { return -0.25 * std::pow(p + w, -1.5); }};
        std::vector<double> f(grid.count);
        for (int i = 0; i < grid.count; ++i) f[i] = std::sin(3.0 * grid.sample(i)) + 2.0;
        auto g = abel_forward_apply(s, f, grid);
        auto fr = abel_solve(s, g, grid);
        double err = rel_l2(fr, f);
        add("generalized Abel round trip (alpha=1/2)", err <= 3e-2, fmt_err(err, 3e-2));
    }

    // CGLS identity system and TV gradient check
    {
        SparseOperator I(6, 6);
        for (int i = 0; i < 6; ++i) {
            I.col_indices.push_back(i);
            I.weights.push_back(1.0);
            I.row_offsets[i + 1] = i + 1;
        }
        std::vector<double> b = {1, -2, 3, 0.5, 0, 2};
        ReconConfig cfg;
        cfg.max_iters = 5;
        cfg.tol = 1e-14;
        auto sol = cgls_tikhonov(I, b, cfg);
        double worst = 0.0;
        for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(sol.x[i] - b[i]));
        add("CGLS solves the identity system", worst <= 1e-10, fmt_err(worst, 1e-10));

        // finite-difference check of the TV gradient on a tiny 2-D problem
        const int mm = 4;
        CounterRng rng(3);
        SparseOperator A(8, mm * mm);
        for (int r = 0; r < 8; ++r) {
            for (int c = 0; c < mm * mm; ++c)
                if (rng.next_unit() < 0.5) {
                    A.col_indices.push_back(c);
                    A.weights.push_back(rng.next_uniform(0.0, 1.0));
                }
            A.row_offsets[r + 1] = A.col_indices.size();
        }
        std::vector<double> bb(8), x(mm * mm);
        for (auto& v : bb) v = rng.next_uniform(-1.0, 1.0);
        for (auto& v : x) v = rng.next_uniform(-1.0, 1.0);
        ReconConfig tv;
        tv.lambda = 0.7;
        tv.beta_smooth = 1e-2;
        auto gr = tv_gradient(A, bb, x, mm, tv);
        double worst_g = 0.0;
        for (int i = 0; i < mm * mm; ++i) {
            const double h = 1e-6;
            auto xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            double fd = (tv_objective(A, bb, xp, mm, tv) - tv_objective(A, bb, xm, mm, tv)) /
                        (2 * h);
            worst_g = std::max(worst_g, std::abs(gr[i] - fd) / std::max(1.0, std::abs(fd)));
        }
        add("TV gradient matches finite differences", worst_g <= 1e-5, fmt_err(worst_g, 1e-5));
    }

    // determinism of the noise path
    {
        ImageGrid grid(17);
        Image img{grid};
        img.at(4, 8) = 1.0;
        CurveSpec c;
        auto A = build_forward_matrix(c, grid, default_p_axis(17), default_y_axis(17), true);
        auto Ae1 = perturb_matrix(A, 0.05, 11);
        auto Ae2 = perturb_matrix(A, 0.05, 11);
        NoiseSpec ns{0.02, 0.05, 13};
        auto b1 = simulate_data(Ae1, img, ns);
        auto b2 = simulate_data(Ae2, img, ns);
        bool same = b1 == b2;
        add("perturbation and noise are seed-deterministic", same, same ? "bitwise equal" : "mismatch");
    }

    return report;
}

}  // namespace abelrad
