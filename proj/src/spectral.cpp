#include "abelrad/spectral.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "abelrad/numerics.hpp"

namespace abelrad {

SinogramSpectrum dft_along_y(const Sinogram& sino) {
    const int n_y = sino.y_axis.count;
    const int n_p = sino.p_axis.count;
    const double dy = sino.y_axis.spacing();
    const int K = (n_y - 1) / 2;
    SinogramSpectrum spec;
    spec.n_p = n_p;
    spec.xi.resize(2 * K + 1);
    for (int k = -K; k <= K; ++k) spec.xi[k + K] = 2.0 * M_PI * k / (n_y * dy);
    spec.values.assign(size_t(n_p) * spec.xi.size(), {0.0, 0.0});
    // direct summation; the row lengths here never warrant an FFT
    std::vector<double> ys(n_y);
    for (int iy = 0; iy < n_y; ++iy) ys[iy] = sino.y_axis.sample(iy);
    for (int ip = 0; ip < n_p; ++ip) {
        for (int k = -K; k <= K; ++k) {
            const double xi = spec.xi[k + K];
            std::complex<double> acc{0.0, 0.0};
            for (int iy = 0; iy < n_y; ++iy) {
                const double ph = -xi * ys[iy];
                acc += sino.at(ip, iy) * std::complex<double>(std::cos(ph), std::sin(ph));
            }
            spec.values[size_t(ip) * spec.xi.size() + (k + K)] = acc * dy;
        }
    }
    return spec;
}

InversionResult invert_R2d(const Sinogram& sino, SupportBand band, const SpectralOptions& opts) {
    const Grid1D& p_axis = sino.p_axis;
    std::pair<int, int> range;
    try {
        range = p_axis.clamp_range(band.a, band.b);
    } catch (const std::exception&) {
        throw std::invalid_argument("invert_R2d: band outside the sampled p range");
    }
    const int ia = range.first, ib = range.second;
    if (ib - ia + 1 < 8) throw std::invalid_argument("invert_R2d: band exceeds p coverage");
    const int refine = std::max(1, opts.refine);
    Grid1D coarse{p_axis.sample(ia), p_axis.sample(ib), ib - ia + 1};
    // the solves run on a refined band grid; the coarse integer-p sampling
    // is too lax for the Volterra march at moderate frequencies
    Grid1D band_grid{coarse.lo, coarse.hi, (coarse.count - 1) * refine + 1};

    SinogramSpectrum spec = dft_along_y(sino);
    const int n_xi = int(spec.xi.size());
    const int K = (n_xi - 1) / 2;
    const double nyquist = M_PI / sino.y_axis.spacing();
    const double cutoff = opts.cutoff_frac * nyquist;

    InversionResult result;
    const int m = 2 * p_axis.count - 1;
    result.image = Image{ImageGrid(m)};

    AbelSolveOptions solve_opts;
    solve_opts.smooth = opts.smooth;
    solve_opts.method = opts.method;
    solve_opts.validate = false;  // the family satisfies the conditions by construction
    solve_opts.quad_tol = opts.quad_tol;

    const int nb = band_grid.count;
    // f̂(ξ_k, ·) on the band grid, only k >= 0 is solved (conjugate symmetry)
    std::vector<std::vector<std::complex<double>>> fhat(
        size_t(K) + 1, std::vector<std::complex<double>>(nb, {0.0, 0.0}));

    // Recovering f̂(ξ,·) is exponentially unstable once ξ times the band
    // length is large (edges nearly parallel to x1 are invisible in the
    // data). Each solve is therefore gated by its forward residual; the
    // frequency ladder stops after a run of rejections.
    std::vector<double> re(coarse.count), im(coarse.count);
    double norm0 = 0.0;
    int consecutive_rejects = 0;
    for (int k = 0; k <= K; ++k) {
        const double xi = spec.xi[K + k];
        if (std::abs(xi) > cutoff) break;
        if (consecutive_rejects >= opts.stop_after_rejects) break;
        for (int i = 0; i < coarse.count; ++i) {
            re[i] = spec.at(ia + i, K + k).real();
            im[i] = spec.at(ia + i, K + k).imag();
        }
        std::vector<std::vector<double>> gs(2, std::vector<double>(nb));
        double norm_data = 0.0;
        for (int i = 0; i < nb; ++i) {
            const double p = band_grid.sample(i);
            gs[0][i] = interp_cubic(coarse, re, p);
            gs[1][i] = interp_cubic(coarse, im, p);
            norm_data += gs[0][i] * gs[0][i] + gs[1][i] * gs[1][i];
        }
        norm_data = std::sqrt(norm_data);
        if (k == 0) norm0 = norm_data;
        if (norm_data <= 1e-13 * std::max(norm0, 1e-300)) continue;  // nothing to recover
        try {
            AbelKernelSpec kspec = ellipse2d_spec(sino.j, sino.s, xi);
            auto sols = abel_solve_multi(kspec, gs, band_grid, solve_opts);
            bool finite = true;
            for (int comp = 0; comp < 2 && finite; ++comp)
                for (double v : sols[comp])
                    if (!std::isfinite(v)) {
                        finite = false;
                        break;
                    }
            double resid = std::numeric_limits<double>::infinity();
            if (finite) {
                auto back_re = abel_forward_apply(kspec, sols[0], band_grid);
                auto back_im = abel_forward_apply(kspec, sols[1], band_grid);
                double acc = 0.0;
                for (int i = 0; i < nb; ++i) {
                    acc += (back_re[i] - gs[0][i]) * (back_re[i] - gs[0][i]);
                    acc += (back_im[i] - gs[1][i]) * (back_im[i] - gs[1][i]);
                }
                resid = std::sqrt(acc) / norm_data;
            }
            if (finite && resid <= opts.residual_tol) {
                // taper marginal frequencies toward zero instead of handing
                // the synthesis a hard spectral edge
                const double w = 1.0 - resid / opts.residual_tol;
                for (int i = 0; i < nb; ++i) fhat[k][i] = {w * sols[0][i], w * sols[1][i]};
                consecutive_rejects = 0;
            } else {
                result.warnings.push_back("frequency " + std::to_string(xi) +
                                          " zeroed: forward residual " + std::to_string(resid));
                ++consecutive_rejects;
            }
        } catch (const std::exception& e) {
            result.warnings.push_back("frequency " + std::to_string(xi) + " zeroed: " + e.what());
            ++consecutive_rejects;
        }
    }

    // inverse transform over ξ onto the image grid; rows below the band (and
    // the lower half plane) stay zero
    const double dxi = spec.xi[1] - spec.xi[0];
    const double scale = dxi / (2.0 * M_PI);
    double norm_re = 0.0, norm_im = 0.0;
    std::vector<std::vector<double>> fhat_re(size_t(K) + 1, std::vector<double>(nb)),
        fhat_im(size_t(K) + 1, std::vector<double>(nb));
    for (int k = 0; k <= K; ++k)
        for (int i = 0; i < nb; ++i) {
            fhat_re[k][i] = fhat[k][i].real();
            fhat_im[k][i] = fhat[k][i].imag();
        }
    std::vector<std::complex<double>> prof(size_t(K) + 1);
    for (int row = 0; row < m; ++row) {
        const double x2 = result.image.x2_of_row(row);
        if (x2 < band.a - 1e-12 || x2 > band.b + 1e-12) continue;
        // per-frequency interpolation from the band grid to this row height
        for (int k = 0; k <= K; ++k)
            prof[k] = {interp_cubic(band_grid, fhat_re[k], x2),
                       interp_cubic(band_grid, fhat_im[k], x2)};
        for (int col = 0; col < m; ++col) {
            const double x1 = result.image.x1_of_col(col);
            std::complex<double> acc = prof[0];
            for (int k = 1; k <= K; ++k) {
                const double ph = spec.xi[K + k] * x1;
                const std::complex<double> e{std::cos(ph), std::sin(ph)};
                acc += prof[k] * e + std::conj(prof[k] * e);  // +ξ and its mirror
            }
            acc *= scale;
            result.image.at(row, col) = acc.real();
            norm_re += acc.real() * acc.real();
            norm_im += acc.imag() * acc.imag();
        }
    }
    result.imag_residual = (norm_re > 0.0) ? std::sqrt(norm_im / norm_re) : 0.0;
    return result;
}

std::vector<double> invert_abel_nd_profile(const std::vector<double>& sino_hat,
                                           const Grid1D& p_grid,
                                           const SpectralKernelFamily& family, SupportBand band,
                                           const AbelSolveOptions& opts) {
    if (int(sino_hat.size()) != p_grid.count)
        throw std::invalid_argument("invert_abel_nd_profile: profile/grid size mismatch");
    auto range = p_grid.clamp_range(band.a, band.b);
    const int ia = range.first, ib = range.second;
    Grid1D band_grid{p_grid.sample(ia), p_grid.sample(ib), ib - ia + 1};
    std::vector<double> sub(sino_hat.begin() + ia, sino_hat.begin() + ib + 1);
    AbelKernelSpec spec = family_spec(family);
    auto f = abel_solve(spec, sub, band_grid, opts);
    std::vector<double> out(p_grid.count, 0.0);
    for (int i = 0; i < band_grid.count; ++i) out[ia + i] = f[i];
    return out;
}

}  // namespace abelrad
