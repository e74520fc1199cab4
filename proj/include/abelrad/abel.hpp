#pragma once

#include <functional>
#include <string>
#include <vector>

#include "abelrad/types.hpp"

namespace abelrad {

/// Kernel description for the generalized Abel equation
///   g(p) = ∫_{B_j(p)} [(-1)^j (p-ω)]^α K(p,ω) f(ω) dω,
/// with α = m_int - beta > -1, beta in [0,1). Orientation j=0 integrates
/// over B_0 = [a,p] (lower triangle T_0), j=1 over B_1 = [p,b].
struct AbelKernelSpec {
    int j = 0;
    int m_int = 0;
    double beta = 0.0;
    std::function<double(double, double)> kernel;  // K(p, omega)
    /// Optional analytic d^i K/dp^i at index i-1; missing entries fall back
    /// to finite differences with stencils kept inside T_j.
    std::vector<std::function<double(double, double)>> kernel_dp;
    double fd_step = 0.0;  // 0 = per-order default step

    double alpha() const { return double(m_int) - beta; }
};

/// d^order K/dp^order, analytic when provided, otherwise Fornberg finite
/// differences on nodes clamped to the p-range [p_lo, p_hi] of T_j.
double kernel_deriv(const AbelKernelSpec& spec, int order, double p, double omega,
                    double p_lo, double p_hi);

/// Discretized kernel of a second-kind Volterra equation; entries outside
/// T_j are exactly zero.
struct TriangularKernelMatrix {
    Grid1D grid;
    int j = 0;
    std::vector<double> values;

    TriangularKernelMatrix() = default;
    TriangularKernelMatrix(Grid1D g, int j_)
        : grid(g), j(j_), values(size_t(g.count) * g.count, 0.0) {}

    double& at(int i, int k) { return values[size_t(i) * grid.count + k]; }
    double at(int i, int k) const { return values[size_t(i) * grid.count + k]; }
};

struct ValidationIssue {
    std::string check;
    double p = 0.0;
    double omega = 0.0;
    double value = 0.0;
};

struct ValidationReport {
    bool pass = true;
    int samples_checked = 0;
    std::vector<ValidationIssue> issues;
    std::string to_text() const;
};

struct AbelSolveOptions {
    enum class Method { substitution, neumann };
    Method method = Method::substitution;
    bool smooth = false;  // Savitzky-Golay (window 7, degree 3) before each derivative
    bool validate = true;
    double neumann_tol = 1e-12;
    int neumann_max_iters = 10000;
    double quad_tol = 1e-10;  // Gauss-Jacobi order-doubling agreement
};

/// Coefficients (c_{0,k},...,c_{k,k}) of the k-th p-derivative of
/// H_α(p,ω) = [(-1)^j(p-ω)]^α K(p,ω):
///   c_{k,k} = 1,  c_{i,k} = (-1)^{j(k-i)} C(k,i) ∏_{q=0}^{k-1-i} (α-q).
std::vector<double> leibniz_coeffs(double alpha, int j, int k);

/// Forward application of the generalized Abel operator on a uniform grid.
/// Product-trapezoid quadrature: K·f is interpolated linearly per cell and
/// integrated exactly against the weight [(-1)^j(p-ω)]^α.
std::vector<double> abel_forward_apply(const AbelKernelSpec& spec, const std::vector<double>& f,
                                       const Grid1D& grid);

/// Abel fractional integral ∫_{D_j(r)} g(p) [(-1)^j(r-p)]^{β-1} dp at every
/// grid node, 0 < β < 1, via Gauss-Jacobi matched to the endpoint weight.
std::vector<double> fractional_integrate(const std::vector<double>& g, double beta, int j,
                                         const Grid1D& grid, double quad_tol = 1e-10);

/// Diagonal constant c_β(r) = π K(r,r) / sin(πβ).
double c_beta_diag(const AbelKernelSpec& spec, double r);

/// L_β(r,ω) = ∫_0^1 K(ω + j(r-ω) + (-1)^j(r-ω)t, ω) t^{-β}(1-t)^{β-1} dt.
double L_beta_eval(const AbelKernelSpec& spec, double r, double omega, double quad_tol = 1e-10);

/// dL_β/dr(r,ω); differentiates through the substituted first argument.
double L_beta_dr_eval(const AbelKernelSpec& spec, double r, double omega, double p_lo,
                      double p_hi, double quad_tol = 1e-10);

/// m-fold numerical derivative (2nd-order central, one-sided at endpoints),
/// optionally smoothing before each pass.
std::vector<double> differentiate_m(const std::vector<double>& g, int m_int, const Grid1D& grid,
                                    bool smooth = false);

enum class SecondKindMethod { substitution, neumann };

/// Solves h(p) = ∫_{B_j} K2(p,ω) f(ω) dω + f(p) on the grid. `substitution`
/// runs the triangular direct solve; `neumann` iterates f <- h - K2 f.
std::vector<double> second_kind_solve(const TriangularKernelMatrix& kernel2,
                                      const std::vector<double>& h, int j,
                                      SecondKindMethod method = SecondKindMethod::substitution,
                                      double neumann_tol = 1e-12, int neumann_max_iters = 10000);

/// Full inversion of the generalized Abel equation: m_int derivatives, the
/// β-fractional step when β>0, reduction to a second-kind equation, solve.
/// The orientation sign (-1)^j is resolved in the output.
std::vector<double> abel_solve(const AbelKernelSpec& spec, const std::vector<double>& g,
                               const Grid1D& grid, const AbelSolveOptions& opts = {});

/// Same pipeline for several right-hand sides; the second-kind kernel is
/// assembled once and shared (the per-frequency solves hand in the real and
/// imaginary components together).
std::vector<std::vector<double>> abel_solve_multi(const AbelKernelSpec& spec,
                                                  const std::vector<std::vector<double>>& gs,
                                                  const Grid1D& grid,
                                                  const AbelSolveOptions& opts = {});

/// Numerical check of the solvability conditions: K(p,p) bounded away from
/// zero and K, G_i = [(-1)^j(p-ω)]^{i-1} K^{(i)} finite on a dense sample of
/// T_j, for 1 <= i <= m_int+1.
ValidationReport validate_kernel(const AbelKernelSpec& spec, const Grid1D& grid);

}  // namespace abelrad
