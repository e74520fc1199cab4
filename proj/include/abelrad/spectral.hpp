#pragma once

#include <complex>
#include <string>
#include <vector>

#include "abelrad/abel.hpp"
#include "abelrad/kernels.hpp"
#include "abelrad/types.hpp"

namespace abelrad {

/// DFT of the sinogram rows along y1 with convention
/// ĝ(p,ξ) = Σ_n g(p,y_n) e^{-i ξ y_n} Δy at the discrete frequencies
/// ξ_k = 2πk/(N Δy), k = -K..K.
struct SinogramSpectrum {
    std::vector<double> xi;                     // signed frequencies, ascending
    int n_p = 0;
    std::vector<std::complex<double>> values;   // p-major: [ip * xi.size() + k]

    std::complex<double> at(int ip, int k) const { return values[size_t(ip) * xi.size() + k]; }
};

SinogramSpectrum dft_along_y(const Sinogram& sino);

struct SpectralOptions {
    double cutoff_frac = 0.8;   // zero |ξ| above this fraction of Nyquist
    bool smooth = true;         // smoothing before each derivative in the solves
    int refine = 4;             // band-grid refinement for the per-frequency solves
    double residual_tol = 0.2;  // forward-residual gate per frequency
    int stop_after_rejects = 3; // consecutive rejections before the ladder stops
    AbelSolveOptions::Method method = AbelSolveOptions::Method::substitution;
    double quad_tol = 1e-10;
};

struct InversionResult {
    Image image;
    double imag_residual = 0.0;  // ||imaginary part|| / ||image||
    std::vector<std::string> warnings;
};

/// Analytic inversion of a one-sided 2-D sinogram: per-frequency weakly
/// singular solve on the support band, inverse Fourier synthesis. The image
/// side is 2 * p_count - 1.
InversionResult invert_R2d(const Sinogram& sino, SupportBand band,
                           const SpectralOptions& opts = {});

/// Per-frequency profile solve for the surface_nd / generalized families:
/// input is ĝ(·, ξ) on the p grid, output f̂(·, ξ) on the band (zero
/// outside).
std::vector<double> invert_abel_nd_profile(const std::vector<double>& sino_hat,
                                           const Grid1D& p_grid,
                                           const SpectralKernelFamily& family, SupportBand band,
                                           const AbelSolveOptions& opts = {});

}  // namespace abelrad
