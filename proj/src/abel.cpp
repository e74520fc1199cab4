#include "abelrad/abel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "abelrad/numerics.hpp"
#include "abelrad/quadrature.hpp"

namespace abelrad {

namespace {

double default_fd_step(int order) {
    // roughly balances truncation against roundoff per derivative order
    switch (order) {
        case 1: return 6e-6;
        case 2: return 1.2e-4;
        case 3: return 7.4e-4;
        default: return 2.5e-3;
    }
}

double sign_j(int j) { return j == 0 ? 1.0 : -1.0; }

}  // namespace

double kernel_deriv(const AbelKernelSpec& spec, int order, double p, double omega, double p_lo,
                    double p_hi) {
    if (order == 0) return spec.kernel(p, omega);
    if (int(spec.kernel_dp.size()) >= order && spec.kernel_dp[order - 1])
        return spec.kernel_dp[order - 1](p, omega);
    const double scale = std::max(1.0, std::abs(p));
    const double h = (spec.fd_step > 0.0 ? spec.fd_step : default_fd_step(order)) * scale;
    const int n_nodes = order + 3;
    // difference stencil constrained to the p-range of T_j for this omega;
    // kernels of the ellipse/hyperbola families are undefined across the
    // diagonal. Degenerate corners fall back to the full grid range.
    double lo = p_lo, hi = p_hi;
    if (spec.j == 0)
        lo = std::max(lo, omega);
    else
        hi = std::min(hi, omega);
    if (hi - lo < (n_nodes - 1) * h) {
        lo = p_lo;
        hi = p_hi;
    }
    double start = p - 0.5 * (n_nodes - 1) * h;
    if (start < lo) start = lo;
    if (start + (n_nodes - 1) * h > hi) start = hi - (n_nodes - 1) * h;
    std::vector<double> nodes(n_nodes);
    for (int i = 0; i < n_nodes; ++i) nodes[i] = start + i * h;
    std::vector<double> w = fd_weights(p, nodes, order);
    double acc = 0.0;
    for (int i = 0; i < n_nodes; ++i) acc += w[i] * spec.kernel(nodes[i], omega);
    return acc;
}

std::vector<double> leibniz_coeffs(double alpha, int j, int k) {
    if (k < 0) throw std::invalid_argument("leibniz_coeffs: k must be >= 0");
    std::vector<double> c(size_t(k) + 1);
    c[k] = 1.0;
    for (int i = 0; i < k; ++i) {
        double binom = 1.0;
        for (int q = 0; q < i; ++q) binom = binom * (k - q) / (q + 1);
        double prod = 1.0;
        for (int q = 0; q <= k - 1 - i; ++q) prod *= (alpha - q);
        double sign = (j == 1 && ((k - i) % 2 == 1)) ? -1.0 : 1.0;
        c[i] = sign * binom * prod;
    }
    return c;
}

std::vector<double> abel_forward_apply(const AbelKernelSpec& spec, const std::vector<double>& f,
                                       const Grid1D& grid) {
    const double alpha = spec.alpha();
    if (!(alpha > -1.0)) throw std::invalid_argument("abel_forward_apply: requires alpha > -1");
    if (int(f.size()) != grid.count)
        throw std::invalid_argument("abel_forward_apply: f/grid size mismatch");
    const int n = grid.count;
    const double h = grid.spacing();
    const double a1 = alpha + 1.0, a2 = alpha + 2.0;
    std::vector<double> g(n, 0.0);

    for (int ip = 0; ip < n; ++ip) {
        const double p = grid.sample(ip);
        double acc = 0.0;
        if (spec.j == 0) {
            // cells [ω_c, ω_{c+1}] with c < ip; u = p - ω decreasing
            for (int c = 0; c < ip; ++c) {
                const double w0 = grid.sample(c), w1 = grid.sample(c + 1);
                const double u0 = p - w0, u1 = p - w1;  // u0 > u1 >= 0
                const double m0 = (std::pow(u0, a1) - std::pow(u1, a1)) / a1;
                const double m1 =
                    (u0 * (std::pow(u0, a1) - std::pow(u1, a1)) / a1 -
                     (std::pow(u0, a2) - std::pow(u1, a2)) / a2) /
                    h;
                const double c0 = spec.kernel(p, w0) * f[c];
                const double c1 = spec.kernel(p, w1) * f[c + 1];
                if (!std::isfinite(c0) || !std::isfinite(c1))
                    throw std::runtime_error("abel_forward_apply: non-finite kernel evaluation");
                acc += c0 * (m0 - m1) + c1 * m1;
            }
        } else {
            // cells with c >= ip; u = ω - p increasing
            for (int c = ip; c < n - 1; ++c) {
                const double w0 = grid.sample(c), w1 = grid.sample(c + 1);
                const double u0 = w0 - p, u1 = w1 - p;  // 0 <= u0 < u1
                const double m0 = (std::pow(u1, a1) - std::pow(u0, a1)) / a1;
                const double m1 =
                    ((std::pow(u1, a2) - std::pow(u0, a2)) / a2 -
                     u0 * (std::pow(u1, a1) - std::pow(u0, a1)) / a1) /
                    h;
                const double c0 = spec.kernel(p, w0) * f[c];
                const double c1 = spec.kernel(p, w1) * f[c + 1];
                if (!std::isfinite(c0) || !std::isfinite(c1))
                    throw std::runtime_error("abel_forward_apply: non-finite kernel evaluation");
                acc += c0 * (m0 - m1) + c1 * m1;
            }
        }
        g[ip] = acc;
    }
    return g;
}

std::vector<double> fractional_integrate(const std::vector<double>& g, double beta, int j,
                                         const Grid1D& grid, double quad_tol) {
    (void)quad_tol;
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("fractional_integrate: beta must be in (0,1)");
    if (int(g.size()) != grid.count)
        throw std::invalid_argument("fractional_integrate: g/grid size mismatch");
    const int n = grid.count;
    const double h = grid.spacing();
    const double a1 = beta, a2 = beta + 1.0;  // exponents of the moment antiderivatives
    const QuadRule& gl = gauss_legendre(6);
    std::vector<double> out(n, 0.0);

    // product integration: the weight [(-1)^j(r-p)]^{β-1} is integrated
    // exactly against the linear interpolant on the two cells next to the
    // singular endpoint, and by Gauss-Legendre against the cubic
    // interpolant on the smooth remainder
    for (int i = 0; i < n; ++i) {
        const double r = grid.sample(i);
        double acc = 0.0;
        const int ncell = (j == 0) ? i : (n - 1 - i);
        for (int d = 1; d <= ncell; ++d) {
            // cell at singular-distance d: (-1)^j(r-p) spans [(d-1)h, dh]
            int c0, c1;  // node indices of the cell endpoints
            if (j == 0) {
                c0 = i - d;
                c1 = i - d + 1;
            } else {
                c0 = i + d;
                c1 = i + d - 1;
            }
            const double u0 = d * h, u1 = (d - 1) * h;  // u at node c0 resp. c1
            if (d <= 2) {
                const double m0 = (std::pow(u0, a1) - std::pow(u1, a1)) / a1;
                const double m1 =
                    (u0 * (std::pow(u0, a1) - std::pow(u1, a1)) / a1 -
                     (std::pow(u0, a2) - std::pow(u1, a2)) / a2) /
                    h;
                acc += g[c0] * (m0 - m1) + g[c1] * m1;
            } else {
                const double pm = 0.5 * (grid.sample(c0) + grid.sample(c1));
                for (int k = 0; k < 6; ++k) {
                    const double p = pm + 0.5 * h * gl.nodes[k];
                    const double u = (j == 0) ? (r - p) : (p - r);
                    acc += 0.5 * h * gl.weights[k] * std::pow(u, beta - 1.0) *
                           interp_cubic(grid, g, p);
                }
            }
        }
        out[i] = acc;
    }
    return out;
}

double c_beta_diag(const AbelKernelSpec& spec, double r) {
    if (!(spec.beta > 0.0 && spec.beta < 1.0))
        throw std::invalid_argument("c_beta_diag: beta=0 has no singular diagonal; use the non-singular path");
    return M_PI * spec.kernel(r, r) / std::sin(M_PI * spec.beta);
}

double L_beta_eval(const AbelKernelSpec& spec, double r, double omega, double quad_tol) {
    const double beta = spec.beta;
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("L_beta_eval: beta must be in (0,1)");
    const int j = spec.j;
    auto f = [&](double t) {
        const double u = omega + j * (r - omega) + sign_j(j) * (r - omega) * t;
        return spec.kernel(u, omega);
    };
    return integrate_unit_jacobi(f, -beta, beta - 1.0, quad_tol);
}

double L_beta_dr_eval(const AbelKernelSpec& spec, double r, double omega, double p_lo,
                      double p_hi, double quad_tol) {
    const double beta = spec.beta;
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("L_beta_dr_eval: beta must be in (0,1)");
    const int j = spec.j;
    // d/dr of the substituted argument is t for j=0 and (1-t) for j=1;
    // the extra factor merges into the Jacobi weight exponents.
    auto f = [&](double t) {
        const double u = omega + j * (r - omega) + sign_j(j) * (r - omega) * t;
        return kernel_deriv(spec, 1, u, omega, p_lo, p_hi);
    };
    if (j == 0) return integrate_unit_jacobi(f, 1.0 - beta, beta - 1.0, quad_tol);
    return integrate_unit_jacobi(f, -beta, beta, quad_tol);
}

std::vector<double> differentiate_m(const std::vector<double>& g, int m_int, const Grid1D& grid,
                                    bool smooth) {
    if (m_int < 1) throw std::invalid_argument("differentiate_m: m_int must be >= 1");
    if (grid.count <= 2 * m_int + 1) throw std::invalid_argument("differentiate_m: grid too coarse");
    if (int(g.size()) != grid.count)
        throw std::invalid_argument("differentiate_m: g/grid size mismatch");
    std::vector<double> cur = g;
    for (int k = 0; k < m_int; ++k) {
        if (smooth) cur = savgol7_smooth(cur);
        cur = derivative_on_grid(cur, grid.spacing());
    }
    return cur;
}

std::vector<double> second_kind_solve(const TriangularKernelMatrix& kernel2,
                                      const std::vector<double>& h, int j,
                                      SecondKindMethod method, double neumann_tol,
                                      int neumann_max_iters) {
    const Grid1D& grid = kernel2.grid;
    const int n = grid.count;
    if (int(h.size()) != n) throw std::invalid_argument("second_kind_solve: h/grid size mismatch");
    const double dw = grid.spacing();

    // trapezoid weight for node k within B_j(p_i)
    auto trap_w = [&](int i, int k) {
        if (j == 0) return (k == 0 || k == i) ? 0.5 * dw : dw;
        return (k == i || k == n - 1) ? 0.5 * dw : dw;
    };

    auto apply_K = [&](const std::vector<double>& f, std::vector<double>& out) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            if (j == 0) {
                if (i > 0)
                    for (int k = 0; k <= i; ++k) acc += trap_w(i, k) * kernel2.at(i, k) * f[k];
            } else {
                if (i < n - 1)
                    for (int k = i; k < n; ++k) acc += trap_w(i, k) * kernel2.at(i, k) * f[k];
            }
            out[i] = acc;
        }
    };

    if (method == SecondKindMethod::substitution) {
        std::vector<double> f(n, 0.0);
        if (j == 0) {
            f[0] = h[0];
            for (int i = 1; i < n; ++i) {
                double acc = 0.0;
                for (int k = 0; k < i; ++k) acc += trap_w(i, k) * kernel2.at(i, k) * f[k];
                f[i] = (h[i] - acc) / (1.0 + 0.5 * dw * kernel2.at(i, i));
            }
        } else {
            f[n - 1] = h[n - 1];
            for (int i = n - 2; i >= 0; --i) {
                double acc = 0.0;
                for (int k = i + 1; k < n; ++k) acc += trap_w(i, k) * kernel2.at(i, k) * f[k];
                f[i] = (h[i] - acc) / (1.0 + 0.5 * dw * kernel2.at(i, i));
            }
        }
        return f;
    }

    // Neumann series: f <- h - K f
    std::vector<double> f = h, Kf(n), next(n);
    double prev_update = -1.0;
    int growing = 0;
    for (int it = 0; it < neumann_max_iters; ++it) {
        apply_K(f, Kf);
        double upd = 0.0, nrm = 0.0;
        for (int i = 0; i < n; ++i) {
            next[i] = h[i] - Kf[i];
            upd += (next[i] - f[i]) * (next[i] - f[i]);
            nrm += next[i] * next[i];
        }
        f.swap(next);
        upd = std::sqrt(upd);
        nrm = std::sqrt(nrm);
        if (upd <= neumann_tol * std::max(1.0, nrm)) return f;
        if (prev_update >= 0.0 && upd > prev_update) {
            if (++growing >= 50)
                throw std::runtime_error(
                    "second_kind_solve: Neumann iteration diverging; the discrete kernel likely "
                    "has spectral radius >= 1 (use the substitution method)");
        } else {
            growing = 0;
        }
        prev_update = upd;
    }
    return f;
}

std::vector<double> abel_solve(const AbelKernelSpec& spec, const std::vector<double>& g,
                               const Grid1D& grid, const AbelSolveOptions& opts) {
    return abel_solve_multi(spec, {g}, grid, opts)[0];
}

std::vector<std::vector<double>> abel_solve_multi(const AbelKernelSpec& spec,
                                                  const std::vector<std::vector<double>>& gs,
                                                  const Grid1D& grid,
                                                  const AbelSolveOptions& opts) {
    if (!(spec.alpha() > -1.0)) throw std::invalid_argument("abel_solve: requires alpha > -1");
    for (const auto& g : gs)
        if (int(g.size()) != grid.count)
            throw std::invalid_argument("abel_solve: g/grid size mismatch");
    if (opts.validate) {
        ValidationReport report = validate_kernel(spec, grid);
        if (!report.pass)
            throw std::runtime_error("abel_solve: kernel validation failed:\n" + report.to_text());
    }
    const int j = spec.j;
    const int n = grid.count;
    const int m = spec.m_int;
    const double sgn = sign_j(j);
    const double p_lo = grid.lo, p_hi = grid.hi;

    // After m differentiations the equation reads
    //   d^m g / dp^m = ∫ Kw(p,ω) [(-1)^j(p-ω)]^{-β} f(ω) dω
    // with Kw = L_α = Σ_i c_{i,m} [(-1)^j(p-ω)]^i K^{(i)} (Kw = K when m=0).
    AbelKernelSpec work;
    work.j = j;
    work.m_int = 0;
    work.beta = spec.beta;
    if (m == 0) {
        work.kernel = spec.kernel;
        work.kernel_dp.push_back([&spec, p_lo, p_hi](double p, double w) {
            return kernel_deriv(spec, 1, p, w, p_lo, p_hi);
        });
    } else {
        std::vector<double> c = leibniz_coeffs(spec.alpha(), j, m);
        work.kernel = [&spec, c, m, j, sgn, p_lo, p_hi](double p, double w) {
            double base = sgn * (p - w);
            double acc = 0.0, pw = 1.0;
            for (int i = 0; i <= m; ++i) {
                acc += c[i] * pw * kernel_deriv(spec, i, p, w, p_lo, p_hi);
                pw *= base;
            }
            return acc;
        };
        work.kernel_dp.push_back([&spec, c, m, j, sgn, p_lo, p_hi](double p, double w) {
            // dL_α/dp = c_0 K' + Σ_{i>=1} c_i [ (-1)^j i u^{i-1} K^{(i)} + u^i K^{(i+1)} ]
            double base = sgn * (p - w);
            double acc = c[0] * kernel_deriv(spec, 1, p, w, p_lo, p_hi);
            double pw_im1 = 1.0;  // base^{i-1}
            for (int i = 1; i <= m; ++i) {
                acc += c[i] * (sgn * i * pw_im1 * kernel_deriv(spec, i, p, w, p_lo, p_hi) +
                               pw_im1 * base * kernel_deriv(spec, i + 1, p, w, p_lo, p_hi));
                pw_im1 *= base;
            }
            return acc;
        });
    }

    // the second-kind kernel and the diagonal constants are shared by all
    // right-hand sides
    TriangularKernelMatrix K2(grid, j);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) {
        const double r = grid.sample(i);
        if (spec.beta > 0.0) {
            const double c = c_beta_diag(work, r);
            diag[i] = c;
            if (j == 0) {
                for (int k = 0; k <= i; ++k)
                    K2.at(i, k) = sgn * L_beta_dr_eval(work, r, grid.sample(k), p_lo, p_hi,
                                                       opts.quad_tol) / c;
            } else {
                for (int k = i; k < n; ++k)
                    K2.at(i, k) = sgn * L_beta_dr_eval(work, r, grid.sample(k), p_lo, p_hi,
                                                       opts.quad_tol) / c;
            }
        } else {
            const double c = work.kernel(r, r);
            diag[i] = c;
            if (j == 0) {
                for (int k = 0; k <= i; ++k)
                    K2.at(i, k) = sgn * work.kernel_dp[0](r, grid.sample(k)) / c;
            } else {
                for (int k = i; k < n; ++k)
                    K2.at(i, k) = sgn * work.kernel_dp[0](r, grid.sample(k)) / c;
            }
        }
    }

    SecondKindMethod method = (opts.method == AbelSolveOptions::Method::neumann)
                                  ? SecondKindMethod::neumann
                                  : SecondKindMethod::substitution;

    std::vector<std::vector<double>> out;
    out.reserve(gs.size());
    for (const auto& g : gs) {
        std::vector<double> G = (m >= 1) ? differentiate_m(g, m, grid, opts.smooth) : g;
        if (spec.beta > 0.0) {
            G = fractional_integrate(G, spec.beta, j, grid, opts.quad_tol);
        }
        if (opts.smooth) G = savgol7_smooth(G);
        std::vector<double> Gp = derivative_on_grid(G, grid.spacing());
        std::vector<double> rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = sgn * Gp[i] / diag[i];

        std::vector<double> f = second_kind_solve(K2, rhs, j, method, opts.neumann_tol,
                                                  opts.neumann_max_iters);
        // the continuum equation carries no information at the degenerate
        // endpoint; pin it by quadratic extrapolation
        if (n >= 4) {
            if (j == 0)
                f[0] = 3.0 * f[1] - 3.0 * f[2] + f[3];
            else
                f[n - 1] = 3.0 * f[n - 2] - 3.0 * f[n - 3] + f[n - 4];
        }
        out.push_back(std::move(f));
    }
    return out;
}

ValidationReport validate_kernel(const AbelKernelSpec& spec, const Grid1D& grid) {
    ValidationReport report;
    const int j = spec.j;
    const int n_diag = std::min(grid.count, 101);
    const double p_lo = grid.lo, p_hi = grid.hi;

    // condition (2): diagonal bounded away from zero
    double min_abs = std::numeric_limits<double>::infinity(), max_abs = 0.0;
    double worst_p = grid.lo;
    for (int i = 0; i < n_diag; ++i) {
        const double p = grid.lo + (grid.hi - grid.lo) * i / (n_diag - 1);
        const double v = spec.kernel(p, p);
        ++report.samples_checked;
        if (!std::isfinite(v)) {
            report.issues.push_back({"diagonal finiteness", p, p, v});
            continue;
        }
        if (std::abs(v) < min_abs) {
            min_abs = std::abs(v);
            worst_p = p;
        }
        max_abs = std::max(max_abs, std::abs(v));
    }
    if (!(min_abs > 1e-10 * max_abs))
        report.issues.push_back({"diagonal non-zero (condition 2)", worst_p, worst_p, min_abs});

    // condition (1): K and G_i finite on a dense sample of T_j; the sample
    // keeps a small margin off the diagonal so difference stencils stay
    // inside the domain
    const int ns = 40;
    const double margin = 2e-2 * (grid.hi - grid.lo);
    for (int a = 0; a <= ns; ++a) {
        const double p = grid.lo + (grid.hi - grid.lo) * a / ns;
        for (int b = 0; b <= ns; ++b) {
            double omega;
            if (j == 0)
                omega = grid.lo + (p - margin - grid.lo) * b / ns;
            else
                omega = p + margin + (grid.hi - p - margin) * b / ns;
            if ((j == 0 && omega > p - margin) || (j == 1 && omega < p + margin)) continue;
            if (omega < grid.lo || omega > grid.hi) continue;
            ++report.samples_checked;
            const double base = sign_j(j) * (p - omega);
            const double Kv = spec.kernel(p, omega);
            if (!std::isfinite(Kv)) {
                report.issues.push_back({"K finiteness (condition 1)", p, omega, Kv});
                continue;
            }
            for (int i = 1; i <= spec.m_int + 1; ++i) {
                const double gi = std::pow(base, i - 1) * kernel_deriv(spec, i, p, omega, p_lo, p_hi);
                if (!std::isfinite(gi)) {
                    report.issues.push_back({"G_" + std::to_string(i) + " finiteness (condition 1)",
                                             p, omega, gi});
                    break;
                }
            }
        }
    }
    report.pass = report.issues.empty();
    return report;
}

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    os << "kernel validation: " << (pass ? "PASS" : "FAIL") << " (" << samples_checked
       << " samples)\n";
    for (const auto& issue : issues)
        os << "  " << issue.check << " at (p=" << issue.p << ", omega=" << issue.omega
           << ") value=" << issue.value << "\n";
    return os.str();
}

}  // namespace abelrad
