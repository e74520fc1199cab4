#include "abelrad/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abelrad/rng.hpp"

namespace abelrad {

Image make_phantom(const PhantomSpec& spec) {
    ImageGrid grid(spec.m);
    Image img{grid};
    const int m = spec.m;

    if (spec.kind == PhantomSpec::Kind::annulus) {
        AnnulusSpec a = spec.annulus;
        if (a.cy == 0.0) a.cy = m / 5.0;
        if (a.r_outer == 0.0) a.r_outer = m / 6.0;
        if (a.r_inner < 0.0) a.r_inner = m / 12.0;
        if (!(a.r_inner < a.r_outer))
            throw std::invalid_argument("make_phantom: requires r_inner < r_outer");
        if (a.cy - a.r_outer <= 0.0)
            throw std::invalid_argument("make_phantom: annulus support spills below x2 = 0");
        for (int r = 0; r < m; ++r) {
            const double x2 = img.x2_of_row(r);
            for (int c = 0; c < m; ++c) {
                const double x1 = img.x1_of_col(c);
                const double d = std::hypot(x1 - a.cx, x2 - a.cy);
                if (d >= a.r_inner && d <= a.r_outer) img.at(r, c) = 1.0;
            }
        }
        return img;
    }

    // sum of axis-aligned ellipse characteristic functions; draws whose
    // support would touch x2 <= 0 are redrawn from the same stream
    CounterRng rng(spec.ellipses.seed);
    for (int e = 0; e < spec.ellipses.count; ++e) {
        double cx = 0.0, cy = 0.0, ax = 0.0, ay = 0.0;
        bool ok = false;
        for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
            cx = rng.next_uniform(-m / 3.0, m / 3.0);
            cy = rng.next_uniform(m / 12.0, 5.0 * m / 12.0);
            ax = rng.next_uniform(m / 60.0, m / 12.0);
            ay = rng.next_uniform(m / 60.0, m / 12.0);
            ok = (cy - ay > 0.0);
        }
        if (!ok) throw std::runtime_error("make_phantom: could not place ellipse above the axis");
        for (int r = 0; r < m; ++r) {
            const double x2 = img.x2_of_row(r);
            const double dy = (x2 - cy) / ay;
            if (std::abs(dy) > 1.0) continue;
            for (int c = 0; c < m; ++c) {
                const double dx = (img.x1_of_col(c) - cx) / ax;
                if (dx * dx + dy * dy <= 1.0) img.at(r, c) += 1.0;
            }
        }
    }
    return img;
}

double delta_error(const Image& x_rec, const Image& x_true) {
    if (x_rec.grid.m != x_true.grid.m)
        throw std::invalid_argument("delta_error: image grids differ");
    const int m = x_true.grid.m;
    double max_rec = 0.0, max_true = 0.0;
    for (double v : x_rec.values) max_rec = std::max(max_rec, v);
    for (double v : x_true.values) max_true = std::max(max_true, v);
    const double sr = (max_rec > 0.0) ? 1.0 / max_rec : 1.0;  // zero image stays zero
    const double st = (max_true > 0.0) ? 1.0 / max_true : 1.0;
    double num = 0.0, den = 0.0;
    for (int r = 0; r < m; ++r) {
        if (!(x_true.x2_of_row(r) > 0.0)) continue;
        for (int c = 0; c < m; ++c) {
            const double a = sr * x_rec.at(r, c);
            const double b = st * x_true.at(r, c);
            num += (a - b) * (a - b);
            den += b * b;
        }
    }
    if (den == 0.0)
        throw std::invalid_argument("delta_error: truth is zero on the upper half plane");
    return std::sqrt(num / den);
}

}  // namespace abelrad
