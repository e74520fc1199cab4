#pragma once

#include <functional>

#include "abelrad/abel.hpp"

namespace abelrad {

/// Support band 0 < a < b for the unknown in x_n; the transforms are
/// injective on functions supported in {a <= x_n <= b}.
struct SupportBand {
    double a = 0.0;
    double b = 0.0;

    SupportBand() = default;
    SupportBand(double a_, double b_);
};

/// Generalized curve r(p,ω) = (p-ω)^{q/2} ν(p,ω); partial derivatives of ν
/// are optional (finite differences otherwise).
struct GeneralizedCurve {
    int q = 1;
    std::function<double(double, double)> nu;
    std::function<double(double, double)> nu_dp;      // ∂ν/∂p
    std::function<double(double, double)> nu_domega;  // ∂ν/∂ω
};

enum class KernelFamily { ellipse2d, surface_nd, generalized, spherical_means };

struct SpectralKernelFamily {
    KernelFamily family = KernelFamily::ellipse2d;
    int j = 0;
    double s = 2.0;
    int n = 2;        // ambient dimension
    double xi = 0.0;  // frequency (2-D) or |ξ| (nD)
    GeneralizedCurve gen;
    int l = 0;        // Gegenbauer degree (spherical means)
};

/// One-branch integrand factor of the per-frequency 2-D equation: the data
/// of the full transform (both x1 branches) is 2x this kernel.
double kernel_2d(int j, double s, double xi, double p, double x2);

/// Factored numerator H with kernel_2d = H / sqrt((-1)^j (p-x2));
/// H(xi,p,p) = sqrt(s p / 2).
double kernel_2d_factored(int j, double s, double xi, double p, double x2);
double kernel_2d_factored_dp(int j, double s, double xi, double p, double x2);

/// Sphere-parametrization constant: alpha_3 = 2, alpha_4 = 2π, and for
/// n >= 5 the product 2π ∏_{i=1}^{n-4} ∫_0^π sin^i φ dφ by quadrature.
double alpha_n(int n);

struct KernelNdFactors {
    double K1 = 0.0;  // sphere cosine integral
    double K2 = 0.0;  // (p+ω)^α
    double K3 = 0.0;  // sqrt((-1)^j(p²-ω²) + sω²)
};

/// Kernel factors of the n>=3 per-frequency generalized Abel equation; the
/// full integrand factor is [(-1)^j(p-ω)]^α s^{α+1/2} K1 K2 K3, α=(n-3)/2.
KernelNdFactors kernel_nd(int j, double s, double xi_mag, int n, double p, double omega);

/// Per-frequency AbelKernelSpec of the n-dimensional transform (n >= 2;
/// n=2 carries the factor from both x1 branches).
AbelKernelSpec surface_nd_spec(int j, double s, double xi_mag, int n);

/// Per-frequency AbelKernelSpec for the 2-D transform (kernel 2H, m=0,
/// beta=1/2).
AbelKernelSpec ellipse2d_spec(int j, double s, double xi);

/// Theorem-4.3 family: assembles α and K1·K2·K3 for the curve
/// r(p,ω) = (p-ω)^{q/2} ν(p,ω) into a solvable spec (j=0 domain).
/// Throws if ν vanishes on the diagonal of [a,b] (checked numerically on
/// first use via validate_kernel).
AbelKernelSpec generalized_kernel(const GeneralizedCurve& c, int n, double xi_mag);

/// Gegenbauer polynomial C_l^γ by the three-term recurrence.
double gegenbauer(int l, double gamma, double x);

/// Spherical-means mode kernel K_l(s,r) = r^{α+1/2}(s+r)^α C_l^γ(r/s),
/// γ=(n-2)/2, α=(n-3)/2. Requires 0 < r <= s_val.
double spherical_means_kernel(int l, int n, double s_val, double r);

/// AbelKernelSpec for the spherical-means mode equation (j=0).
AbelKernelSpec spherical_means_spec(int l, int n);

/// Spec lookup by family tag (used by the per-frequency profile solver).
AbelKernelSpec family_spec(const SpectralKernelFamily& family);

}  // namespace abelrad
