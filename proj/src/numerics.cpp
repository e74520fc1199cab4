#include "abelrad/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace abelrad {

double interp_cubic(const Grid1D& grid, const std::vector<double>& values, double x) {
    if (int(values.size()) != grid.count)
        throw std::invalid_argument("interp_cubic: values/grid size mismatch");
    const int n = grid.count;
    if (n < 4) {
        // fall back to linear on very small grids
        const double h = grid.spacing();
        int i = std::clamp(int((x - grid.lo) / h), 0, n - 2);
        double t = (x - grid.sample(i)) / h;
        return values[i] * (1.0 - t) + values[i + 1] * t;
    }
    const double h = grid.spacing();
    int i = int(std::floor((x - grid.lo) / h));
    int start = std::clamp(i - 1, 0, n - 4);
    const double t = (x - grid.sample(start)) / h;  // in node units from window start
    // Lagrange basis over nodes 0,1,2,3 of the window
    const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return l0 * values[start] + l1 * values[start + 1] + l2 * values[start + 2] +
           l3 * values[start + 3];
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order) {
    const int n = int(nodes.size());
    if (order < 0 || n < order + 1) throw std::invalid_argument("fd_weights: too few nodes");
    // Fornberg, one target point, derivatives 0..order
    std::vector<std::vector<double>> c(size_t(n), std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, order);
        double c2 = 1.0;
        double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][order];
    return w;
}

std::vector<double> savgol7_smooth(const std::vector<double>& values) {
    const int n = int(values.size());
    if (n < 7) return values;
    // Least-squares cubic over 7 points; precomputed smoothing rows for each
    // offset of the evaluation point within the window.
    static const auto rows = [] {
        std::array<std::array<double, 7>, 7> r{};
        for (int off = 0; off < 7; ++off) {
            // normal equations for the Vandermonde at nodes 0..6, eval at `off`
            double ata[4][4] = {};
            for (int k = 0; k < 7; ++k) {
                double pk[4] = {1.0, double(k), double(k) * k, double(k) * k * k};
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) ata[a][b] += pk[a] * pk[b];
            }
            // invert 4x4 by Gauss-Jordan
            double inv[4][4] = {};
            for (int a = 0; a < 4; ++a) inv[a][a] = 1.0;
            for (int col = 0; col < 4; ++col) {
                int piv = col;
                for (int rr = col + 1; rr < 4; ++rr)
                    if (std::abs(ata[rr][col]) > std::abs(ata[piv][col])) piv = rr;
                std::swap(ata[col], ata[piv]);
                std::swap(inv[col], inv[piv]);
                double d = ata[col][col];
                for (int cc = 0; cc < 4; ++cc) {
                    ata[col][cc] /= d;
                    inv[col][cc] /= d;
                }
                for (int rr = 0; rr < 4; ++rr) {
                    if (rr == col) continue;
                    double f = ata[rr][col];
                    for (int cc = 0; cc < 4; ++cc) {
                        ata[rr][cc] -= f * ata[col][cc];
                        inv[rr][cc] -= f * inv[col][cc];
                    }
                }
            }
            double po[4] = {1.0, double(off), double(off) * off, double(off) * off * off};
            for (int k = 0; k < 7; ++k) {
                double pk[4] = {1.0, double(k), double(k) * k, double(k) * k * k};
                double acc = 0.0;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) acc += po[a] * inv[a][b] * pk[b];
                r[off][k] = acc;
            }
        }
        return r;
    }();
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        int start = std::clamp(i - 3, 0, n - 7);
        int off = i - start;
        double acc = 0.0;
        for (int k = 0; k < 7; ++k) acc += rows[off][k] * values[start + k];
        out[i] = acc;
    }
    return out;
}

std::vector<double> derivative_on_grid(const std::vector<double>& values, double spacing) {
    const int n = int(values.size());
    if (n < 3) throw std::invalid_argument("derivative_on_grid: grid too coarse");
    std::vector<double> out(n);
    const double inv2h = 1.0 / (2.0 * spacing);
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) * inv2h;
    for (int i = 1; i < n - 1; ++i) out[i] = (values[i + 1] - values[i - 1]) * inv2h;
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) * inv2h;
    return out;
}

}  // namespace abelrad
