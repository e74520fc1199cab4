#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "abelrad/kernels.hpp"
#include "abelrad/types.hpp"

namespace abelrad {

/// Integration curve family. j=0 is the elliptic arc
/// (x1-y1)^2 + s x2^2 = t (upper half), j=1 the hyperbola branch
/// -(x1-y1)^2 + s x2^2 = t; `generalized` uses r(p,ω) = (p-ω)^{q/2} ν.
struct CurveSpec {
    enum class Kind { ellipse, hyperbola, generalized };
    Kind kind = Kind::ellipse;
    int j = 0;
    double s = 2.0;
    GeneralizedCurve gen;
    /// Max |x1 - y1| for the hyperbola's infinite arc. Zero means "derive
    /// from the image bounding box" inside build_forward_matrix;
    /// curve_points itself requires a positive value for the hyperbola.
    double truncation = 0.0;
};

struct CurvePoint {
    double x1 = 0.0;
    double x2 = 0.0;
    double weight = 0.0;  // arc-length measure x quadrature step
};

/// Quadrature nodes on the curve with p = sqrt(t/s). The parametrization
/// absorbs the arc-length measure's endpoint singularities, so uniform
/// midpoint sampling in the curve parameter converges fast.
std::vector<CurvePoint> curve_points(const CurveSpec& c, double p, double y1, int samples);

struct NoiseSpec {
    double gamma = 0.0;    // relative Gaussian noise level
    double epsilon = 0.0;  // matrix perturbation half-width
    std::uint64_t seed = 0;
};

/// Default §-style sampling: p in {1..(m+1)/2} and y1 in [-m,m] with 2m
/// even steps.
Grid1D default_p_axis(int m);
Grid1D default_y_axis(int m);

/// Discrete curve transform: one row per (p, y1) pair (p-major), bilinear
/// deposition of arc weights into the image pixels. two_sided=true adds the
/// mirror curve reflected in {x2 = 0}.
SparseOperator build_forward_matrix(const CurveSpec& c, const ImageGrid& img,
                                    const Grid1D& p_axis, const Grid1D& y_axis, bool two_sided);

/// Multiplies every weight by an independent U(1-eps, 1+eps) draw (one RNG
/// substream per entry index); the sparsity pattern is unchanged.
SparseOperator perturb_matrix(const SparseOperator& A, double epsilon, std::uint64_t seed);

/// b = A_eps x + gamma * ||A_eps x||_2 / sqrt(l) * eta, eta iid standard
/// normal (one substream per data element).
std::vector<double> simulate_data(const SparseOperator& A_eps, const Image& x,
                                  const NoiseSpec& noise);

/// The noise step of simulate_data on an already-applied clean vector.
std::vector<double> add_simulated_noise(std::vector<double> clean, double gamma,
                                        std::uint64_t seed);

/// Wraps an operator-applied data vector into a Sinogram (p-major rows).
Sinogram vector_to_sinogram(const std::vector<double>& data, const Grid1D& p_axis,
                            const Grid1D& y_axis, int j, double s);

/// Direct quadrature of a continuous f over the curves: the
/// matrix-independent reference sinogram.
Sinogram radon_sinogram_bruteforce(const CurveSpec& c,
                                   const std::function<double(double, double)>& f,
                                   const ImageGrid& img, const Grid1D& p_axis,
                                   const Grid1D& y_axis, bool two_sided,
                                   int oversample = 4);

}  // namespace abelrad
