#include "kimura/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "kimura/errors.hpp"

namespace kimura {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole,
                            double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

bool TridiagonalMatrix::diagonally_dominant() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        if (i > 0) off += std::abs(lower[i - 1]);
        if (i + 1 < n) off += std::abs(upper[i]);
        if (diag[i] < 0.0 || diag[i] < off) return false;
    }
    return true;
}

std::vector<double> solve_tridiagonal(const TridiagonalMatrix& A,
                                      std::span<const double> rhs) {
    const std::size_t n = A.size();
    std::vector<double> c(n, 0.0), d(n, 0.0), x(n, 0.0);
    c[0] = A.upper.empty() ? 0.0 : A.upper[0] / A.diag[0];
    d[0] = rhs[0] / A.diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double denom = A.diag[i] - A.lower[i - 1] * c[i - 1];
        if (i + 1 < n) c[i] = A.upper[i] / denom;
        d[i] = (rhs[i] - A.lower[i - 1] * d[i - 1]) / denom;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    return x;
}

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : knots_(x.begin(), x.end()), values_(y.begin(), y.end()) {
    const std::size_t n = knots_.size();
    if (n < 4 || values_.size() != n) {
        throw InterpolationError("cubic spline requires >= 4 knots");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(knots_[i] < knots_[i + 1])) {
            throw InterpolationError("spline knots must be strictly increasing");
        }
    }

    // Solve for the second derivatives M_i.  Interior rows are the standard
    // continuity equations; the not-a-knot conditions make the third
    // derivative continuous across the second and second-to-last knots:
    //   (M1 - M0)/h0 = (M2 - M1)/h1   and mirrored at the right end.
    // Eliminating M0 and M_{n-1} leaves a tridiagonal system in M1..M_{n-2}.
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = knots_[i + 1] - knots_[i];

    const std::size_t m = n - 2; // unknowns M_1..M_{n-2}
    TridiagonalMatrix A;
    A.lower.assign(m - 1, 0.0);
    A.diag.assign(m, 0.0);
    A.upper.assign(m - 1, 0.0);
    std::vector<double> rhs(m, 0.0);

    auto div_diff = [&](std::size_t i) {
        return (values_[i + 1] - values_[i]) / h[i];
    };

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::size_t r = i - 1;
        double lo = h[i - 1] / 6.0;
        double di = (h[i - 1] + h[i]) / 3.0;
        double up = h[i] / 6.0;
        rhs[r] = div_diff(i) - div_diff(i - 1);
        if (i == 1) {
            // substitute M0 = M1 + (h0/h1)(M1 - M2)
            di += lo * (1.0 + h[0] / h[1]);
            up -= lo * (h[0] / h[1]);
            lo = 0.0;
        } else if (i + 2 == n) {
            // substitute M_{n-1} = M_{n-2} + (h_{n-2}/h_{n-3})(M_{n-2} - M_{n-3})
            di += up * (1.0 + h[n - 2] / h[n - 3]);
            lo -= up * (h[n - 2] / h[n - 3]);
            up = 0.0;
        }
        if (r > 0) A.lower[r - 1] = lo;
        A.diag[r] = di;
        if (r + 1 < m) A.upper[r] = up;
    }

    const std::vector<double> inner = solve_tridiagonal(A, rhs);
    second_derivs_.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) second_derivs_[i + 1] = inner[i];
    second_derivs_[0] =
        second_derivs_[1] + (h[0] / h[1]) * (second_derivs_[1] - second_derivs_[2]);
    second_derivs_[n - 1] =
        second_derivs_[n - 2] +
        (h[n - 2] / h[n - 3]) * (second_derivs_[n - 2] - second_derivs_[n - 3]);
}

double CubicSpline::operator()(double t) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    if (i > 0) --i;
    if (i + 1 >= knots_.size()) i = knots_.size() - 2;

    const double hi = knots_[i + 1] - knots_[i];
    const double dl = t - knots_[i];
    const double dr = knots_[i + 1] - t;
    const double Ml = second_derivs_[i];
    const double Mr = second_derivs_[i + 1];
    return Ml * dr * dr * dr / (6.0 * hi) + Mr * dl * dl * dl / (6.0 * hi) +
           (values_[i] - Ml * hi * hi / 6.0) * dr / hi +
           (values_[i + 1] - Mr * hi * hi / 6.0) * dl / hi;
}

double log_weight_antiderivative(double x) {
    // antiderivative of log(x) + log(1-x): x log x - (1-x) log(1-x) + 1 - 2x,
    // with the x log x -> 0 convention at the endpoints.
    double v = 1.0 - 2.0 * x;
    if (x > 0.0) v += x * std::log(x);
    if (x < 1.0) v -= (1.0 - x) * std::log(1.0 - x);
    return v;
}

double log_weight_integral(double p, double q) {
    return log_weight_antiderivative(q) - log_weight_antiderivative(p);
}

} // namespace kimura
