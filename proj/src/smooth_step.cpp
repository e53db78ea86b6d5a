#include "photonlab/smooth_step.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace photonlab {

namespace {

// Antiderivative of (1-u^2)^4 with P(-1) = -128/315, P(1) = 128/315.
double bump_antiderivative(double u) {
    const double u2 = u * u;
    return u * (1.0 + u2 * (-4.0 / 3 + u2 * (6.0 / 5 + u2 * (-4.0 / 7 + u2 / 9))));
}

constexpr double kBumpNorm = 315.0 / 256.0;

// int_{-1}^{1} u^m cos(xi u) du for even m, via the upward recurrence
//   I_m = 2 sin(xi)/xi + 2 m cos(xi)/xi^2 - m(m-1)/xi^2 I_{m-2}.
double even_moment_cos(int m, double xi) {
    const double s = std::sin(xi), c = std::cos(xi);
    double I = 2.0 * s / xi;
    for (int k = 2; k <= m; k += 2)
        I = 2.0 * s / xi + 2.0 * k * c / (xi * xi) -
            static_cast<double>(k) * (k - 1) / (xi * xi) * I;
    return I;
}

}  // namespace

double bump_fourier(double xi) {
    xi = std::abs(xi);
    if (xi < 2.0) {
        // Taylor series in xi^2 with moments M_{2j} = int u^{2j} B(u) du.
        double sum = 0.0, term;
        double xi2 = xi * xi;
        // M_{2j} = kBumpNorm * 2 * sum_k binom(4,k)(-1)^k / (2j+2k+1)
        double pw = 1.0;  // (-1)^j xi^{2j} / (2j)!
        for (int j = 0; j < 24; ++j) {
            double moment = 0.0;
            static const double binom[5] = {1, -4, 6, -4, 1};
            for (int k = 0; k <= 4; ++k)
                moment += binom[k] / (2.0 * j + 2.0 * k + 1.0);
            moment *= 2.0 * kBumpNorm;
            term = pw * moment;
            sum += term;
            if (std::abs(term) < 1e-18) break;
            pw *= -xi2 / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
        }
        return sum;
    }
    static const double binom[5] = {1, -4, 6, -4, 1};
    double sum = 0.0;
    for (int k = 0; k <= 4; ++k)
        sum += binom[k] * even_moment_cos(2 * k, xi);
    return kBumpNorm * sum;
}

SmoothStep::SmoothStep(double center, double width, StepDirection direction)
    : center_(center), width_(width), direction_(direction) {
    if (!(width > 0))
        throw std::invalid_argument("SmoothStep: width must be positive");
}

SmoothStep make_smooth_step(double center, double width,
                            StepDirection direction) {
    return SmoothStep(center, width, direction);
}

double SmoothStep::operator()(double a) const {
    const double u = (a - center_) / width_;
    double up;
    if (u <= -1.0)
        up = 0.0;
    else if (u >= 1.0)
        up = 1.0;
    else
        up = 0.5 + kBumpNorm * bump_antiderivative(u);
    return direction_ == StepDirection::up ? up : 1.0 - up;
}

double SmoothStep::derivative(double a) const {
    const double u = (a - center_) / width_;
    if (u <= -1.0 || u >= 1.0) return 0.0;
    const double one_minus = 1.0 - u * u;
    const double b = kBumpNorm * one_minus * one_minus * one_minus * one_minus / width_;
    return direction_ == StepDirection::up ? b : -b;
}

std::complex<double> SmoothStep::derivative_fourier(double xi) const {
    // F'(a) = sgn * B((a-c)/w)/w  =>  Fhat'(xi) = sgn * e^{-i xi c} Bhat(w xi).
    const double sgn = direction_ == StepDirection::up ? 1.0 : -1.0;
    return sgn * std::polar(bump_fourier(width_ * xi), -xi * center_);
}

double SmoothStep::fourier_truncation(double tail) const {
    // Cached tail integral T(y) = int_y^inf |Bhat(xi)| dxi on a fixed mesh,
    // closed-form endpoint asymptotics 768/xi^5 beyond the mesh.
    static const double kStep = 0.05;
    static const double kMax = 600.0;
    static const std::vector<double> table = [] {
        const int n = static_cast<int>(kMax / kStep) + 1;
        std::vector<double> t(n);
        t[n - 1] = kBumpNorm * 768.0 / (4.0 * std::pow(kMax, 4));
        for (int i = n - 2; i >= 0; --i) {
            const double a = std::abs(bump_fourier(i * kStep));
            const double b = std::abs(bump_fourier((i + 1) * kStep));
            t[i] = t[i + 1] + 0.5 * (a + b) * kStep;
        }
        return t;
    }();
    const double target = 0.5 * tail * width_;
    for (size_t i = 0; i < table.size(); ++i)
        if (table[i] < target) return i * kStep / width_;
    throw std::invalid_argument("SmoothStep: requested Fourier tail too small");
}

}  // namespace photonlab
