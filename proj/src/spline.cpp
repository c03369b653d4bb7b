#include "gaitnorm/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaitnorm/types.hpp"

namespace gaitnorm {

NaturalCubicSpline::NaturalCubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), m_(x.size(), 0.0) {
    if (x_.size() != y_.size()) throw ValidationError("spline: x and y lengths differ");
    if (x_.size() < 2) throw ValidationError("spline: fewer than 2 knots");
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
            throw ValidationError("spline: non-finite knot");
        }
        if (i > 0 && !(x_[i] > x_[i - 1])) {
            throw ValidationError("spline: knot abscissae must be strictly increasing");
        }
    }

    const std::size_t n = x_.size();
    if (n == 2) return;

    // Interior equations, i = 1..n-2:
    //   h[i-1] M[i-1] + 2 (h[i-1] + h[i]) M[i] + h[i] M[i+1]
    //     = 6 ((y[i+1] - y[i]) / h[i] - (y[i] - y[i-1]) / h[i-1])
    // with M[0] = M[n-1] = 0. Solved by the Thomas algorithm.
    const std::size_t interior = n - 2;
    std::vector<double> diag(interior), upper(interior), rhs(interior);
    for (std::size_t k = 0; k < interior; ++k) {
        const std::size_t i = k + 1;
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        diag[k] = 2.0 * (h0 + h1);
        upper[k] = h1;
        rhs[k] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    for (std::size_t k = 1; k < interior; ++k) {
        const double lower = x_[k + 1] - x_[k];  // h[i-1] for row i = k+1
        const double w = lower / diag[k - 1];
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    m_[interior] = rhs[interior - 1] / diag[interior - 1];
    for (std::size_t k = interior - 1; k-- > 0;) {
        m_[k + 1] = (rhs[k] - upper[k] * m_[k + 2]) / diag[k];
    }
}

std::size_t NaturalCubicSpline::locate(double x) const {
    if (!(x >= x_.front() && x <= x_.back())) {
        throw ValidationError("spline: extrapolation requested at x = " + std::to_string(x));
    }
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const auto idx = static_cast<std::size_t>(std::distance(x_.begin(), it));
    return std::min(idx == 0 ? 0 : idx - 1, x_.size() - 2);
}

double NaturalCubicSpline::operator()(double x) const {
    const std::size_t i = locate(x);
    if (x == x_[i]) return y_[i];
    if (x == x_[i + 1]) return y_[i + 1];
    const double h = x_[i + 1] - x_[i];
    const double left = x_[i + 1] - x;
    const double right = x - x_[i];
    return m_[i] * left * left * left / (6.0 * h) + m_[i + 1] * right * right * right / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * left + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * right;
}

double NaturalCubicSpline::derivative(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double left = x_[i + 1] - x;
    const double right = x - x_[i];
    return -m_[i] * left * left / (2.0 * h) + m_[i + 1] * right * right / (2.0 * h) +
           (y_[i + 1] - y_[i]) / h - (m_[i + 1] - m_[i]) * h / 6.0;
}

double NaturalCubicSpline::second_derivative(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    return (m_[i] * (x_[i + 1] - x) + m_[i + 1] * (x - x_[i])) / h;
}

CubicPiece NaturalCubicSpline::piece(std::size_t i) const {
    const double h = x_[i + 1] - x_[i];
    CubicPiece p;
    p.a = y_[i];
    p.b = (y_[i + 1] - y_[i]) / h - h * (2.0 * m_[i] + m_[i + 1]) / 6.0;
    p.c = m_[i] / 2.0;
    p.d = (m_[i + 1] - m_[i]) / (6.0 * h);
    return p;
}

}  // namespace gaitnorm
