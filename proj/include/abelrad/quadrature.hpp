#pragma once

#include <functional>
#include <vector>

namespace abelrad {

struct QuadRule {
    std::vector<double> nodes;    // on [-1,1]
    std::vector<double> weights;
};

/// Gauss-Legendre rule of order n on [-1,1]. Rules are cached.
const QuadRule& gauss_legendre(int n);

/// Gauss-Jacobi rule of order n for weight (1-x)^a (1+x)^b on [-1,1],
/// a,b > -1. Rules are cached.
const QuadRule& gauss_jacobi(int n, double a, double b);

/// Integrates f over [lo,hi] with Gauss-Legendre, doubling the order from
/// order0 until two successive results agree to tol (relative to
/// max(1,|value|)). Throws on non-convergence at max_order.
double integrate_legendre(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-12, int order0 = 32, int max_order = 1024);

/// Integrates ∫_0^1 t^mu (1-t)^nu f(t) dt, mu,nu > -1, with a Gauss-Jacobi
/// rule matched to the weight; doubling as above.
double integrate_unit_jacobi(const std::function<double(double)>& f, double mu, double nu,
                             double tol = 1e-10, int order0 = 32, int max_order = 1024);

}  // namespace abelrad
