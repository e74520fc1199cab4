#pragma once

#include <cstdint>
#include <vector>

#include "abelrad/types.hpp"

namespace abelrad {

struct ReconConfig {
    double lambda = 0.0;       // regularization weight
    double beta_smooth = 1e-3; // TV smoothing
    int max_iters = 100;
    double tol = 1e-8;         // relative stopping threshold
    bool nonneg = false;
    std::uint64_t seed = 0;    // reserved for randomized initialization
};

struct IterationRecord {
    int iter = 0;
    double objective = 0.0;
    double residual = 0.0;
    double step = 0.0;
};

struct SolveResult {
    std::vector<double> x;
    std::vector<IterationRecord> log;
    int iterations = 0;
    bool breakdown = false;           // zero search-direction curvature
    bool line_search_failure = false; // step underflow
};

/// CGLS on the augmented system [A; sqrt(lambda) I] x ~ [b; 0]. Stops when
/// the normal-equation residual falls below tol relative to its initial
/// value, or at max_iters.
SolveResult cgls_tikhonov(const SparseOperator& A, const std::vector<double>& b,
                          const ReconConfig& cfg);

/// ||Ax-b||^2 + lambda sqrt(||grad x||^2 + beta^2) with the forward
/// difference 2-D gradient (Neumann boundary) on an m x m image.
double tv_objective(const SparseOperator& A, const std::vector<double>& b,
                    const std::vector<double>& x, int m, const ReconConfig& cfg);

std::vector<double> tv_gradient(const SparseOperator& A, const std::vector<double>& b,
                                const std::vector<double>& x, int m, const ReconConfig& cfg);

/// Projected gradient descent with backtracking from x0 = 0; the projection
/// clamps negatives when cfg.nonneg. The objective is non-increasing across
/// accepted steps.
SolveResult tv_reconstruct(const SparseOperator& A, const std::vector<double>& b, int m,
                           const ReconConfig& cfg);

}  // namespace abelrad
