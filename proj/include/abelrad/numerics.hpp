#pragma once

#include <vector>

#include "abelrad/types.hpp"

namespace abelrad {

/// Local cubic (4-point Lagrange) interpolation of grid data at x.
/// Windows are clamped at the boundaries; x may sit slightly outside the
/// grid (extrapolation from the end window).
double interp_cubic(const Grid1D& grid, const std::vector<double>& values, double x);

/// Finite-difference weights for the m-th derivative at point x0 from
/// arbitrary nodes (Fornberg's recursion). weights.size() == nodations.size().
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order);

/// Savitzky-Golay smoothing, window 7, degree 3. Boundary points use the
/// same least-squares fit on the clamped window.
std::vector<double> savgol7_smooth(const std::vector<double>& values);

/// One numerical derivative on a uniform grid: 2nd-order central stencil in
/// the interior, 2nd-order one-sided at the two endpoints.
std::vector<double> derivative_on_grid(const std::vector<double>& values, double spacing);

}  // namespace abelrad
