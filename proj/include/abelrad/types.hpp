#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace abelrad {

/// Uniform 1-D sample grid on [lo, hi] with `count` nodes (count >= 2).
struct Grid1D {
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;

    Grid1D() = default;
    Grid1D(double lo_, double hi_, int count_);

    double spacing() const { return (hi - lo) / (count - 1); }
    double sample(int i) const;

    /// Sub-grid covering the nodes with lo_val <= x <= hi_val.
    /// Returns the index range [first, last] (inclusive); throws if empty.
    std::pair<int, int> clamp_range(double lo_val, double hi_val) const;
};

/// m x m pixel grid, m odd. Per-axis coordinates are
///   x = -m/2 + m/(m-1) * k,  k = 0..m-1,
/// symmetric about 0 and containing 0.
struct ImageGrid {
    int m = 0;

    ImageGrid() = default;
    explicit ImageGrid(int m_);

    double coord(int k) const { return -0.5 * m + (double(m) / (m - 1)) * k; }
    double spacing() const { return double(m) / (m - 1); }
    double lo() const { return -0.5 * m; }
    double hi() const { return 0.5 * m; }
};

/// Image on an ImageGrid. Row-major, x2 varies slowest; row 0 is the TOP
/// row (largest x2), row m-1 the bottom (smallest x2). Column c has
/// x1 = grid.coord(c), row r has x2 = grid.coord(m-1-r).
struct Image {
    ImageGrid grid;
    std::vector<double> values;

    Image() = default;
    explicit Image(ImageGrid g) : grid(g), values(size_t(g.m) * g.m, 0.0) {}

    double& at(int row, int col) { return values[size_t(row) * grid.m + col]; }
    double at(int row, int col) const { return values[size_t(row) * grid.m + col]; }

    double x1_of_col(int col) const { return grid.coord(col); }
    double x2_of_row(int row) const { return grid.coord(grid.m - 1 - row); }
    int row_of_x2_index(int k) const { return grid.m - 1 - k; }
};

/// Transform data indexed by (semi-axis parameter p, center coordinate y1).
/// values is p-major: values[ip * y_axis.count + iy].
struct Sinogram {
    Grid1D p_axis;
    Grid1D y_axis;
    std::vector<double> values;
    int j = 0;       // 0 = ellipse, 1 = hyperbola
    double s = 2.0;  // shape constant, > 0

    Sinogram() = default;
    Sinogram(Grid1D p, Grid1D y, int j_, double s_);

    double& at(int ip, int iy) { return values[size_t(ip) * y_axis.count + iy]; }
    double at(int ip, int iy) const { return values[size_t(ip) * y_axis.count + iy]; }
};

/// Sparse forward operator in compressed sparse row form.
struct SparseOperator {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint64_t> row_offsets;  // length rows+1, monotone
    std::vector<std::uint32_t> col_indices;
    std::vector<double> weights;

    SparseOperator() = default;
    SparseOperator(int r, int c) : rows(r), cols(c), row_offsets(size_t(r) + 1, 0) {}

    std::uint64_t nnz() const { return weights.size(); }
};

/// y = A x. Pure; x.size() must equal A.cols.
std::vector<double> sparse_apply(const SparseOperator& A, const std::vector<double>& x);

/// x = A^T y. Pure; y.size() must equal A.rows.
std::vector<double> sparse_apply_adjoint(const SparseOperator& A, const std::vector<double>& y);

/// Largest singular value estimate by power iteration on A^T A
/// (deterministic start vector).
double sparse_norm_estimate(const SparseOperator& A, int iters = 30);

}  // namespace abelrad
