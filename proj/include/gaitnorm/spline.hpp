#pragma once

#include <span>
#include <vector>

namespace gaitnorm {

/// Power-basis coefficients of one spline piece:
/// s(x) = a + b·t + c·t² + d·t³ with t = x − x[i].
struct CubicPiece {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

/// C2 piecewise-cubic interpolant with zero second derivative at both end
/// knots. Stores knots and the second derivatives M at each knot.
class NaturalCubicSpline {
public:
    /// Requires at least 2 knots, strictly increasing x, finite y.
    NaturalCubicSpline(std::span<const double> x, std::span<const double> y);

    const std::vector<double>& knots_x() const { return x_; }
    const std::vector<double>& knots_y() const { return y_; }
    const std::vector<double>& second_derivatives() const { return m_; }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    /// Throws ValidationError outside [x_min, x_max].
    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    /// Coefficients of piece i (on [x[i], x[i+1]]), i < knot_count() − 1.
    CubicPiece piece(std::size_t i) const;
    std::size_t knot_count() const { return x_.size(); }

private:
    std::size_t locate(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

inline NaturalCubicSpline fit_natural_cubic(std::span<const double> x, std::span<const double> y) {
    return NaturalCubicSpline(x, y);
}

}  // namespace gaitnorm
