#include "abelrad/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abelrad/rng.hpp"

namespace abelrad {

namespace {

double curve_r(const GeneralizedCurve& c, double p, double omega) {
    return std::pow(std::max(p - omega, 0.0), 0.5 * c.q) * c.nu(p, omega);
}

double curve_r_domega(const GeneralizedCurve& c, double p, double omega) {
    const double u = std::max(p - omega, 0.0);
    double nu_w;
    if (c.nu_domega) {
        nu_w = c.nu_domega(p, omega);
    } else {
        const double h = 1e-6 * std::max(1.0, std::abs(omega));
        nu_w = (c.nu(p, omega + h) - c.nu(p, omega - h)) / (2.0 * h);
    }
    return -0.5 * c.q * std::pow(u, 0.5 * c.q - 1.0) * c.nu(p, omega) +
           std::pow(u, 0.5 * c.q) * nu_w;
}

}  // namespace

std::vector<CurvePoint> curve_points(const CurveSpec& c, double p, double y1, int samples) {
    if (!(p > 0.0)) throw std::invalid_argument("curve_points: requires p > 0");
    if (samples < 2) throw std::invalid_argument("curve_points: requires samples >= 2");
    const double t = c.s * p * p;
    std::vector<CurvePoint> pts;

    if (c.kind == CurveSpec::Kind::ellipse) {
        // x1 = sqrt(t) sin(theta) removes the arc-measure endpoint
        // singularity; weight = sqrt(t + (1/s - 1) x1^2) dtheta
        pts.reserve(samples);
        const double dth = M_PI / samples;
        for (int k = 0; k < samples; ++k) {
            const double th = -0.5 * M_PI + (k + 0.5) * dth;
            const double x1 = std::sqrt(t) * std::sin(th);
            const double x2 = p * std::cos(th);
            const double w = std::sqrt(t + (1.0 / c.s - 1.0) * x1 * x1) * dth;
            pts.push_back({x1 + y1, x2, w});
        }
        return pts;
    }

    if (c.kind == CurveSpec::Kind::hyperbola) {
        if (!(c.truncation > 0.0))
            throw std::invalid_argument("curve_points: hyperbola requires a positive truncation");
        // x1 = sqrt(t) sinh(u); weight = sqrt(t + (1/s + 1) x1^2) du
        const double umax = std::asinh(c.truncation / std::sqrt(t));
        const double du = 2.0 * umax / samples;
        pts.reserve(samples);
        for (int k = 0; k < samples; ++k) {
            const double u = -umax + (k + 0.5) * du;
            const double x1 = std::sqrt(t) * std::sinh(u);
            const double x2 = p * std::cosh(u);
            const double w = std::sqrt(t + (1.0 / c.s + 1.0) * x1 * x1) * du;
            pts.push_back({x1 + y1, x2, w});
        }
        return pts;
    }

    // generalized curve: both reflection branches, omega = p - tau^2 removes
    // the q=1 slope singularity at the apex
    const double tau_max = std::sqrt(p);
    const double dtau = tau_max / samples;
    pts.reserve(2 * samples);
    for (int k = 0; k < samples; ++k) {
        const double tau = (k + 0.5) * dtau;
        const double omega = p - tau * tau;
        const double r = curve_r(c.gen, p, omega);
        const double rw = curve_r_domega(c.gen, p, omega);
        const double w = std::sqrt(1.0 + rw * rw) * 2.0 * tau * dtau;
        pts.push_back({y1 + r, omega, w});
        pts.push_back({y1 - r, omega, w});
    }
    return pts;
}

Grid1D default_p_axis(int m) { return Grid1D{1.0, 0.5 * (m + 1), (m + 1) / 2}; }

Grid1D default_y_axis(int m) { return Grid1D{double(-m), double(m), 2 * m + 1}; }

namespace {

// one row's worth of deposits into the pixel grid
struct RowScratch {
    std::vector<double> acc;
    std::vector<int> touched;
    explicit RowScratch(int n) : acc(n, 0.0) { touched.reserve(4096); }
    void add(int idx, double w) {
        if (acc[idx] == 0.0) touched.push_back(idx);
        acc[idx] += w;
    }
    void clear() {
        for (int idx : touched) acc[idx] = 0.0;
        touched.clear();
    }
};

int samples_for_curve(const CurveSpec& c, double p, double cell) {
    // probe the arc length with a coarse polyline; the sample budget is 8x
    // the cells crossed
    auto pts = curve_points(c, p, 0.0, 64);
    const size_t stride = (c.kind == CurveSpec::Kind::generalized) ? 2 : 1;  // one branch
    double len = 0.0;
    for (size_t k = stride; k < pts.size(); k += stride) {
        double dx = pts[k].x1 - pts[k - stride].x1, dy = pts[k].x2 - pts[k - stride].x2;
        len += std::sqrt(dx * dx + dy * dy);
    }
    if (stride == 2) len *= 2.0;
    int n = int(8.0 * len / cell) + 8;
    return std::clamp(n, 32, 400000);
}

}  // namespace

SparseOperator build_forward_matrix(const CurveSpec& c, const ImageGrid& img,
                                    const Grid1D& p_axis, const Grid1D& y_axis, bool two_sided) {
    const int m = img.m;
    const double lo = img.lo(), hi = img.hi(), cell = img.spacing();
    const int n_rows = p_axis.count * y_axis.count;
    SparseOperator A(n_rows, m * m);

    RowScratch scratch(m * m);

    // deposits for one curve point; mirror row is (m-1) - wr so the
    // reflected weights match bitwise up to one rounding
    auto deposit = [&](double X, double Y, double w, bool mirror) {
        const double u = (X - lo) / cell;
        const double wr0 = (hi - Y) / cell;
        for (int pass = 0; pass < (mirror ? 2 : 1); ++pass) {
            const double wr = pass == 0 ? wr0 : double(m - 1) - wr0;
            const int c0 = int(std::floor(u));
            const int r0 = int(std::floor(wr));
            const double fx = u - c0, fy = wr - r0;
            const double w00 = w * (1.0 - fx) * (1.0 - fy);
            const double w01 = w * fx * (1.0 - fy);
            const double w10 = w * (1.0 - fx) * fy;
            const double w11 = w * fx * fy;
            if (unsigned(r0) < unsigned(m)) {
                if (unsigned(c0) < unsigned(m) && w00 != 0.0) scratch.add(r0 * m + c0, w00);
                if (unsigned(c0 + 1) < unsigned(m) && w01 != 0.0) scratch.add(r0 * m + c0 + 1, w01);
            }
            if (unsigned(r0 + 1) < unsigned(m)) {
                if (unsigned(c0) < unsigned(m) && w10 != 0.0) scratch.add((r0 + 1) * m + c0, w10);
                if (unsigned(c0 + 1) < unsigned(m) && w11 != 0.0)
                    scratch.add((r0 + 1) * m + c0 + 1, w11);
            }
        }
    };

    // Two passes over identical work: the first sizes the CSR arrays so the
    // fill pass can allocate exactly (the operators get large).
    for (int pass = 0; pass < 2; ++pass) {
        std::uint64_t nnz = 0;
        for (int ip = 0; ip < p_axis.count; ++ip) {
            const double p = p_axis.sample(ip);
            CurveSpec eff = c;
            if (c.kind == CurveSpec::Kind::hyperbola) {
                // truncate where the curve exits the image box; the arc
                // above x2 = hi (+ one cell) cannot touch the grid
                const double x2max = hi + cell;
                const double tt = c.s * p * p;
                double T = c.s * x2max * x2max - tt;
                if (T <= 0.0) continue;  // whole curve above the grid
                T = std::sqrt(T);
                T = std::min(T, double(m));
                if (c.truncation > 0.0) T = std::min(T, c.truncation);
                eff.truncation = T;
            }
            const int samples = samples_for_curve(eff, p, cell);
            auto pts = curve_points(eff, p, 0.0, samples);
            std::sort(pts.begin(), pts.end(),
                      [](const CurvePoint& a, const CurvePoint& b) { return a.x1 < b.x1; });
            std::vector<double> xs(pts.size());
            for (size_t k = 0; k < pts.size(); ++k) xs[k] = pts[k].x1;

            for (int iy = 0; iy < y_axis.count; ++iy) {
                const double y1 = y_axis.sample(iy);
                const int row = ip * y_axis.count + iy;
                // only the points whose shifted x1 can reach the grid
                auto first = std::lower_bound(xs.begin(), xs.end(), lo - cell - y1);
                auto last = std::upper_bound(xs.begin(), xs.end(), hi + cell - y1);
                for (auto it = first; it != last; ++it) {
                    const auto& pt = pts[it - xs.begin()];
                    deposit(pt.x1 + y1, pt.x2, pt.weight, two_sided);
                }
                if (pass == 0) {
                    nnz += scratch.touched.size();
                    A.row_offsets[row + 1] = nnz;
                } else {
                    std::sort(scratch.touched.begin(), scratch.touched.end());
                    std::uint64_t at = A.row_offsets[row];
                    for (int idx : scratch.touched) {
                        A.col_indices[at] = std::uint32_t(idx);
                        A.weights[at] = scratch.acc[idx];
                        ++at;
                    }
                }
                scratch.clear();
            }
        }
        if (pass == 0) {
            // rows skipped by the hyperbola cutoff keep offset 0; make the
            // offsets cumulative before sizing
            for (int r = 0; r < n_rows; ++r)
                if (A.row_offsets[r + 1] < A.row_offsets[r]) A.row_offsets[r + 1] = A.row_offsets[r];
            A.col_indices.resize(A.row_offsets[n_rows]);
            A.weights.resize(A.row_offsets[n_rows]);
        }
    }
    return A;
}

SparseOperator perturb_matrix(const SparseOperator& A, double epsilon, std::uint64_t seed) {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::invalid_argument("perturb_matrix: epsilon must be in [0,1)");
    SparseOperator out = A;
    for (std::uint64_t k = 0; k < out.nnz(); ++k)
        out.weights[k] *= CounterRng::uniform_at(seed, k, 1.0 - epsilon, 1.0 + epsilon);
    return out;
}

std::vector<double> simulate_data(const SparseOperator& A_eps, const Image& x,
                                  const NoiseSpec& noise) {
    return add_simulated_noise(sparse_apply(A_eps, x.values), noise.gamma, noise.seed);
}

std::vector<double> add_simulated_noise(std::vector<double> clean, double gamma,
                                        std::uint64_t seed) {
    if (gamma <= 0.0) return clean;
    double norm = 0.0;
    for (double v : clean) norm += v * v;
    norm = std::sqrt(norm);
    const double scale = gamma * norm / std::sqrt(double(clean.size()));
    for (size_t i = 0; i < clean.size(); ++i) {
        CounterRng rng(seed, i);
        clean[i] += scale * rng.next_normal();
    }
    return clean;
}

Sinogram vector_to_sinogram(const std::vector<double>& data, const Grid1D& p_axis,
                            const Grid1D& y_axis, int j, double s) {
    Sinogram sino(p_axis, y_axis, j, s);
    if (data.size() != sino.values.size())
        throw std::invalid_argument("vector_to_sinogram: size mismatch");
    sino.values = data;
    return sino;
}

Sinogram radon_sinogram_bruteforce(const CurveSpec& c,
                                   const std::function<double(double, double)>& f,
                                   const ImageGrid& img, const Grid1D& p_axis,
                                   const Grid1D& y_axis, bool two_sided, int oversample) {
    Sinogram sino(p_axis, y_axis, c.j == 1 ? 1 : 0, c.s);
    const double cell = img.spacing();
    for (int ip = 0; ip < p_axis.count; ++ip) {
        const double p = p_axis.sample(ip);
        CurveSpec eff = c;
        if (c.kind == CurveSpec::Kind::hyperbola) {
            const double x2max = img.hi() + cell;
            double T = c.s * x2max * x2max - c.s * p * p;
            if (T <= 0.0) continue;
            T = std::sqrt(T);
            T = std::min(T, double(img.m));
            if (c.truncation > 0.0) T = std::min(T, c.truncation);
            eff.truncation = T;
        }
        const int samples = oversample * samples_for_curve(eff, p, cell);
        auto pts = curve_points(eff, p, 0.0, std::min(samples, 2000000));
        for (int iy = 0; iy < y_axis.count; ++iy) {
            const double y1 = y_axis.sample(iy);
            double acc = 0.0;
            for (const auto& pt : pts) {
                acc += pt.weight * f(pt.x1 + y1, pt.x2);
                if (two_sided) acc += pt.weight * f(pt.x1 + y1, -pt.x2);
            }
            sino.at(ip, iy) = acc;
        }
    }
    return sino;
}

}  // namespace abelrad
