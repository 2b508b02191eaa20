#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kimura {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 60);

/// Tridiagonal matrix in banded storage. For an n x n matrix, diag has n
/// entries, lower/upper have n-1 (lower[i] couples row i+1 to column i).
struct TridiagonalMatrix {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    std::size_t size() const { return diag.size(); }
    /// Row-wise weak diagonal dominance with nonnegative diagonal.
    bool diagonally_dominant() const;
};

/// Thomas algorithm. Overwrites nothing; returns the solution of A x = rhs.
std::vector<double> solve_tridiagonal(const TridiagonalMatrix& A,
                                      std::span<const double> rhs);

/// Cubic spline through (x_i, y_i) with not-a-knot end conditions, the
/// boundary rule SciPy's interpolators default to. Reproduces cubic
/// polynomials exactly. Requires at least 4 strictly increasing knots.
class CubicSpline {
public:
    CubicSpline(std::span<const double> x, std::span<const double> y);

    /// Evaluate at t. Outside the knot range the nearest end polynomial is
    /// extended; callers owning a domain boundary enforce it themselves.
    double operator()(double t) const;

    double x_front() const { return knots_.front(); }
    double x_back() const { return knots_.back(); }

private:
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> second_derivs_;
};

/// antiderivative of log(x(1-x)); valid on (0, 1), continuous limits at 0, 1.
double log_weight_antiderivative(double x);

/// integral of log(x(1-x)) over [p, q] in closed form, 0 <= p <= q <= 1.
double log_weight_integral(double p, double q);

} // namespace kimura
