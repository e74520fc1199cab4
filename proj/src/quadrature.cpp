#include "abelrad/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <Eigen/Dense>

namespace abelrad {

namespace {

QuadRule make_legendre(int n) {
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double eps = 1e-15;
    const int mid = (n + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < eps) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
// recurrence matrix, weights come from the first eigenvector components.
QuadRule make_jacobi(int n, double a, double b) {
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
    const double apb = a + b;
    diag(0) = (b - a) / (apb + 2.0);
    for (int k = 1; k < n; ++k) {
        const double d = 2.0 * k + apb;
        diag(k) = (b * b - a * a) / (d * (d + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        double bk;
        if (k == 1) {
            // the (k+a+b) factor cancels against (2k+a+b-1) at k=1
            bk = 4.0 * (1.0 + a) * (1.0 + b) / ((apb + 2.0) * (apb + 2.0) * (apb + 3.0));
        } else {
            const double d = 2.0 * k + apb;
            bk = 4.0 * k * (k + a) * (k + b) * (k + apb) / (d * d * (d + 1.0) * (d - 1.0));
        }
        sub(k - 1) = std::sqrt(bk);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double mu0 = std::pow(2.0, apb + 1.0) *
                       std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                                std::lgamma(apb + 2.0));
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

std::mutex g_cache_mutex;
std::map<int, QuadRule> g_legendre_cache;
std::map<std::tuple<int, double, double>, QuadRule> g_jacobi_cache;

}  // namespace

const QuadRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_legendre_cache.find(n);
    if (it == g_legendre_cache.end()) it = g_legendre_cache.emplace(n, make_legendre(n)).first;
    return it->second;
}

const QuadRule& gauss_jacobi(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi: order must be >= 1");
    if (a <= -1.0 || b <= -1.0) throw std::invalid_argument("gauss_jacobi: exponents must be > -1");
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto key = std::make_tuple(n, a, b);
    auto it = g_jacobi_cache.find(key);
    if (it == g_jacobi_cache.end()) it = g_jacobi_cache.emplace(key, make_jacobi(n, a, b)).first;
    return it->second;
}

double integrate_legendre(const std::function<double(double)>& f, double lo, double hi,
                          double tol, int order0, int max_order) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    auto eval = [&](int n) {
        const QuadRule& rule = gauss_legendre(n);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
        return acc * half;
    };
    double prev = eval(order0);
    for (int n = 2 * order0; n <= max_order; n *= 2) {
        double cur = eval(n);
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw std::runtime_error("integrate_legendre: node count exhausted without convergence");
}

double integrate_unit_jacobi(const std::function<double(double)>& f, double mu, double nu,
                             double tol, int order0, int max_order) {
    // substituting t = tau^2 first: the kernels this integrates are often
    // functions of sqrt(t) (half-power curve families), which the rule in t
    // cannot resolve. With tau = (1+x)/2 the weight becomes
    // (1-x)^nu (1+x)^{2mu+1} times the smooth factor (1+tau)^nu.
    const double scale = 2.0 * std::pow(2.0, -(2.0 * mu + nu + 2.0));
    auto eval = [&](int n) {
        const QuadRule& rule = gauss_jacobi(n, nu, 2.0 * mu + 1.0);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double tau = 0.5 * (1.0 + rule.nodes[i]);
            acc += rule.weights[i] * std::pow(1.0 + tau, nu) * f(tau * tau);
        }
        return acc * scale;
    };
    double prev = eval(order0);
    double prev_delta = -1.0;
    for (int n = 2 * order0; n <= max_order; n *= 2) {
        double cur = eval(n);
        const double delta = std::abs(cur - prev);
        const double scale = std::max(1.0, std::abs(cur));
        if (delta <= tol * scale) return cur;
        // difference-quotient kernels bottom out above tol; accept once the
        // doubling stops helping near that floor
        if (prev_delta >= 0.0 && delta > 0.25 * prev_delta && delta <= 1e3 * tol * scale)
            return cur;
        prev_delta = delta;
        prev = cur;
    }
    throw std::runtime_error("integrate_unit_jacobi: node count exhausted without convergence");
}

}  // namespace abelrad
