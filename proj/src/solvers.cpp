#include "abelrad/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abelrad {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// forward-difference gradient; far-edge rows/cols carry zero
void grad2d(const std::vector<double>& x, int m, std::vector<double>& gx,
            std::vector<double>& gy) {
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            const size_t i = size_t(r) * m + c;
            gx[i] = (c + 1 < m) ? x[i + 1] - x[i] : 0.0;
            gy[i] = (r + 1 < m) ? x[i + m] - x[i] : 0.0;
        }
    }
}

// exact adjoint of grad2d (negative divergence)
void grad2d_adjoint(const std::vector<double>& gx, const std::vector<double>& gy, int m,
                    std::vector<double>& out) {
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            const size_t i = size_t(r) * m + c;
            double acc = 0.0;
            if (c + 1 < m) acc -= gx[i];
            if (c > 0) acc += gx[i - 1];
            if (r + 1 < m) acc -= gy[i];
            if (r > 0) acc += gy[i - m];
            out[i] = acc;
        }
    }
}

}  // namespace

SolveResult cgls_tikhonov(const SparseOperator& A, const std::vector<double>& b,
                          const ReconConfig& cfg) {
    if (int(b.size()) != A.rows) throw std::invalid_argument("cgls_tikhonov: dimension mismatch");
    if (cfg.lambda < 0.0) throw std::invalid_argument("cgls_tikhonov: lambda must be >= 0");
    const double lambda = cfg.lambda;
    SolveResult result;
    result.x.assign(A.cols, 0.0);
    std::vector<double> r = b;
    std::vector<double> s = sparse_apply_adjoint(A, r);  // - lambda x = 0 at x0 = 0
    std::vector<double> p = s;
    double gamma = dot(s, s);
    const double stop = cfg.tol * std::sqrt(gamma);

    for (int it = 1; it <= cfg.max_iters; ++it) {
        std::vector<double> q = sparse_apply(A, p);
        const double curv = dot(q, q) + lambda * dot(p, p);
        if (!(curv > 0.0)) {
            result.breakdown = true;
            break;
        }
        const double alpha = gamma / curv;
        for (int i = 0; i < A.cols; ++i) result.x[i] += alpha * p[i];
        for (int i = 0; i < A.rows; ++i) r[i] -= alpha * q[i];
        s = sparse_apply_adjoint(A, r);
        if (lambda > 0.0)
            for (int i = 0; i < A.cols; ++i) s[i] -= lambda * result.x[i];
        const double gamma_new = dot(s, s);
        const double objective = dot(r, r) + lambda * dot(result.x, result.x);
        result.log.push_back({it, objective, std::sqrt(gamma_new), alpha});
        result.iterations = it;
        if (std::sqrt(gamma_new) <= stop) break;
        const double beta = gamma_new / gamma;
        for (int i = 0; i < A.cols; ++i) p[i] = s[i] + beta * p[i];
        gamma = gamma_new;
    }
    return result;
}

double tv_objective(const SparseOperator& A, const std::vector<double>& b,
                    const std::vector<double>& x, int m, const ReconConfig& cfg) {
    std::vector<double> r = sparse_apply(A, x);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    std::vector<double> gx(x.size()), gy(x.size());
    grad2d(x, m, gx, gy);
    const double g2 = dot(gx, gx) + dot(gy, gy);
    return dot(r, r) + cfg.lambda * std::sqrt(g2 + cfg.beta_smooth * cfg.beta_smooth);
}

std::vector<double> tv_gradient(const SparseOperator& A, const std::vector<double>& b,
                                const std::vector<double>& x, int m, const ReconConfig& cfg) {
    std::vector<double> r = sparse_apply(A, x);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    std::vector<double> grad = sparse_apply_adjoint(A, r);
    for (double& v : grad) v *= 2.0;
    if (cfg.lambda > 0.0) {
        std::vector<double> gx(x.size()), gy(x.size()), div(x.size());
        grad2d(x, m, gx, gy);
        const double g2 = dot(gx, gx) + dot(gy, gy);
        const double G = std::sqrt(g2 + cfg.beta_smooth * cfg.beta_smooth);
        grad2d_adjoint(gx, gy, m, div);
        for (size_t i = 0; i < grad.size(); ++i) grad[i] += cfg.lambda * div[i] / G;
    }
    return grad;
}

SolveResult tv_reconstruct(const SparseOperator& A, const std::vector<double>& b, int m,
                           const ReconConfig& cfg) {
    if (int(b.size()) != A.rows) throw std::invalid_argument("tv_reconstruct: dimension mismatch");
    if (!(cfg.beta_smooth > 0.0))
        throw std::invalid_argument("tv_reconstruct: beta_smooth must be > 0");
    SolveResult result;
    result.x.assign(A.cols, 0.0);

    const double opnorm = sparse_norm_estimate(A, 20);
    double t = (opnorm > 0.0) ? 1.0 / (2.0 * opnorm * opnorm) : 1.0;

    double obj = tv_objective(A, b, result.x, m, cfg);
    std::vector<double> history;
    history.push_back(obj);

    std::vector<double> trial(A.cols);
    for (int it = 1; it <= cfg.max_iters; ++it) {
        std::vector<double> g = tv_gradient(A, b, result.x, m, cfg);
        t *= 2.0;  // allow the accepted step to grow again
        double obj_trial = 0.0;
        bool accepted = false;
        while (t >= 1e-16) {
            double moved2 = 0.0;
            for (int i = 0; i < A.cols; ++i) {
                double v = result.x[i] - t * g[i];
                if (cfg.nonneg && v < 0.0) v = 0.0;
                trial[i] = v;
                moved2 += (trial[i] - result.x[i]) * (trial[i] - result.x[i]);
            }
            obj_trial = tv_objective(A, b, trial, m, cfg);
            if (obj_trial <= obj - 1e-4 / t * moved2) {
                accepted = true;
                break;
            }
            if (moved2 == 0.0) break;  // projection pinned every coordinate
            t *= 0.5;
        }
        if (!accepted) {
            result.line_search_failure = t < 1e-16;
            break;
        }
        result.x.swap(trial);
        obj = obj_trial;
        history.push_back(obj);
        std::vector<double> r = sparse_apply(A, result.x);
        for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
        result.log.push_back({it, obj, norm2(r), t});
        result.iterations = it;
        // stop when the objective has flattened over the last 10 iterations
        if (int(history.size()) > 10) {
            const double before = history[history.size() - 11];
            if ((before - obj) <= cfg.tol * std::max(1.0, std::abs(obj))) break;
        }
    }
    return result;
}

}  // namespace abelrad
