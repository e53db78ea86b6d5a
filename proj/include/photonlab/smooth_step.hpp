#pragma once

#include <complex>
#include <vector>

namespace photonlab {

enum class StepDirection { up, down };

/// Smoothed characteristic function of a half line.
///
/// The transition profile is the antiderivative of the normalized bump
/// B(u) = (315/256)(1-u^2)^4 on [-1,1], so the derivative is exactly
/// compactly supported in [center-width, center+width] and the Fourier
/// transform of the derivative decays like |xi|^-5.
class SmoothStep {
public:
    SmoothStep(double center, double width, StepDirection direction);

    double center() const { return center_; }
    double width() const { return width_; }
    StepDirection direction() const { return direction_; }

    /// F(a): 0 below the transition, 1 above (direction == up).
    double operator()(double a) const;
    /// dF/da, supported in [center-width, center+width].
    double derivative(double a) const;

    /// Fourier transform of the derivative profile,
    ///   Fhat'(xi) = \int F'(a) e^{-i xi a} da.
    /// |Fhat'| <= 1 everywhere and Fhat'(0) = +-1 (sign of the jump).
    std::complex<double> derivative_fourier(double xi) const;

    /// Smallest X such that \int_{|xi|>X} |Fhat'(xi)| dxi < tail.
    double fourier_truncation(double tail) const;

private:
    double center_;
    double width_;
    StepDirection direction_;
};

SmoothStep make_smooth_step(double center, double width,
                            StepDirection direction);

/// Fourier transform of the unit bump B(u) = (315/256)(1-u^2)^4,
///   Bhat(xi) = \int_{-1}^{1} B(u) e^{-i xi u} du  (real and even).
double bump_fourier(double xi);

}  // namespace photonlab
