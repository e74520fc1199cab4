#include "abelrad/types.hpp"

#include <cmath>

namespace abelrad {

Grid1D::Grid1D(double lo_, double hi_, int count_) : lo(lo_), hi(hi_), count(count_) {
    if (!(lo < hi)) throw std::invalid_argument("Grid1D: requires lo < hi");
    if (count < 2) throw std::invalid_argument("Grid1D: requires count >= 2");
}

double Grid1D::sample(int i) const {
    if (i < 0 || i >= count) throw std::out_of_range("Grid1D::sample: index out of range");
    return lo + i * spacing();
}

std::pair<int, int> Grid1D::clamp_range(double lo_val, double hi_val) const {
    const double h = spacing();
    int first = int(std::ceil((lo_val - lo) / h - 1e-12));
    int last = int(std::floor((hi_val - lo) / h + 1e-12));
    if (first < 0) first = 0;
    if (last > count - 1) last = count - 1;
    if (first > last) throw std::invalid_argument("Grid1D::clamp_range: empty range");
    return {first, last};
}

ImageGrid::ImageGrid(int m_) : m(m_) {
    if (m < 3 || m % 2 == 0) throw std::invalid_argument("ImageGrid: m must be odd and >= 3");
}

Sinogram::Sinogram(Grid1D p, Grid1D y, int j_, double s_) : p_axis(p), y_axis(y), j(j_), s(s_) {
    if (j != 0 && j != 1) throw std::invalid_argument("Sinogram: j must be 0 or 1");
    if (!(s > 0)) throw std::invalid_argument("Sinogram: s must be positive");
    values.assign(size_t(p_axis.count) * y_axis.count, 0.0);
}

std::vector<double> sparse_apply(const SparseOperator& A, const std::vector<double>& x) {
    if (int(x.size()) != A.cols) throw std::invalid_argument("sparse_apply: dimension mismatch");
    std::vector<double> y(A.rows, 0.0);
    for (int r = 0; r < A.rows; ++r) {
        double acc = 0.0;
        for (std::uint64_t k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k)
            acc += A.weights[k] * x[A.col_indices[k]];
        y[r] = acc;
    }
    return y;
}

std::vector<double> sparse_apply_adjoint(const SparseOperator& A, const std::vector<double>& y) {
    if (int(y.size()) != A.rows) throw std::invalid_argument("sparse_apply_adjoint: dimension mismatch");
    std::vector<double> x(A.cols, 0.0);
    for (int r = 0; r < A.rows; ++r) {
        const double yr = y[r];
        if (yr == 0.0) continue;
        for (std::uint64_t k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k)
            x[A.col_indices[k]] += A.weights[k] * yr;
    }
    return x;
}

double sparse_norm_estimate(const SparseOperator& A, int iters) {
    std::vector<double> v(A.cols);
    for (int i = 0; i < A.cols; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * i);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<double> w = sparse_apply_adjoint(A, sparse_apply(A, v));
        double nw = 0.0;
        for (double c : w) nw += c * c;
        nw = std::sqrt(nw);
        if (nw == 0.0) return 0.0;
        for (int i = 0; i < A.cols; ++i) v[i] = w[i] / nw;
        lambda = nw;
    }
    return std::sqrt(lambda);
}

}  // namespace abelrad
