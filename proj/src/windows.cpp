#include "photonlab/windows.hpp"

#include "photonlab/smooth_step.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace photonlab {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Rising crossover profile at edge e with width theta*e.
double edge_rise(double x, double e, double theta) {
    const SmoothStep s = make_smooth_step(e, theta * e, StepDirection::up);
    return s(x);
}

// sin(pi/2 * rise) and its complementary falling half. The falling half
// is written as sin of the complement so both vanish exactly (not just
// to rounding) where the crossover saturates; window supports are then
// exactly disjoint two shells apart.
double rise_half(double rise) { return std::sin(kHalfPi * rise); }
double fall_half(double rise) { return std::sin(kHalfPi * (1.0 - rise)); }

void validate_theta(double theta) {
    if (!(theta > 0) || theta > 0.25)
        throw std::invalid_argument("window smoothing fraction must be in (0, 1/4]");
}

}  // namespace

ScalarSymbol interval_symbol(double lo, double hi, double theta) {
    validate_theta(theta);
    if (!(0 < lo && lo < hi))
        throw std::invalid_argument("interval_symbol: need 0 < lo < hi");
    return [lo, hi, theta](double x) {
        return rise_half(edge_rise(x, lo, theta)) *
               fall_half(edge_rise(x, hi, theta));
    };
}

ScalarSymbol window_symbol(const DyadicWindow& w) {
    if (w.n < 0) throw std::invalid_argument("window_symbol: n must be >= 0");
    const auto [lo, hi] = w.interval();
    return interval_symbol(lo, hi, w.theta);
}

ScalarSymbol low_tail_symbol(int n_max, double theta) {
    validate_theta(theta);
    const double e = std::exp2(-n_max - 1);
    return [e, theta](double x) {
        return fall_half(edge_rise(x, e, theta));
    };
}

ScalarSymbol high_tail_symbol(double theta) {
    validate_theta(theta);
    return [theta](double x) {
        return rise_half(edge_rise(x, 1.0, theta));
    };
}

namespace {

// Chebyshev coefficients of degree `deg` from deg+1 Gauss nodes.
RVector chebyshev_coeffs(const ScalarSymbol& symbol, double lo, double hi,
                         int deg) {
    const int m = deg + 1;
    RVector coeffs = RVector::Zero(m);
    for (int j = 0; j < m; ++j) {
        const double th = std::numbers::pi * (j + 0.5) / m;
        const double y = std::cos(th);
        const double x = 0.5 * (hi + lo) + 0.5 * (hi - lo) * y;
        const double fj = symbol(x);
        // T_k(y) by recurrence, accumulated into all coefficients.
        double t_prev = 1.0, t_cur = y;
        coeffs[0] += fj;
        if (m > 1) coeffs[1] += fj * t_cur;
        for (int k = 2; k < m; ++k) {
            const double t_next = 2.0 * y * t_cur - t_prev;
            coeffs[k] += fj * t_next;
            t_prev = t_cur;
            t_cur = t_next;
        }
    }
    coeffs *= 2.0 / m;
    coeffs[0] *= 0.5;
    return coeffs;
}

double clenshaw(const RVector& c, double y) {
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        const double b0 = 2.0 * y * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return y * b1 - b2 + c[0];
}

double measured_error(const ScalarSymbol& symbol, const ChebyshevFilter& f,
                      int samples) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        // Half the samples uniform in x, half Chebyshev-dense.
        double y;
        if (i % 2 == 0)
            y = -1.0 + 2.0 * (i + 0.5) / samples;
        else
            y = std::cos(std::numbers::pi * (i + 0.5) / samples);
        const double x = 0.5 * (f.hi + f.lo) + 0.5 * (f.hi - f.lo) * y;
        worst = std::max(worst, std::abs(clenshaw(f.coeffs, y) - symbol(x)));
    }
    return worst;
}

}  // namespace

ChebyshevFilter make_chebyshev_filter(const ScalarSymbol& symbol, double lo,
                                      double hi, double tol, int degree_cap,
                                      int forced_degree) {
    if (!(hi > lo))
        throw std::invalid_argument("make_chebyshev_filter: need hi > lo");
    ChebyshevFilter filter;
    filter.lo = lo;
    filter.hi = hi;

    int deg = forced_degree > 0 ? forced_degree : 256;
    while (true) {
        filter.coeffs = chebyshev_coeffs(symbol, lo, hi, deg);
        // Tail coefficient mass bounds the truncation part of the error.
        double tail = 0.0;
        for (int k = deg - deg / 8; k <= deg; ++k)
            tail += std::abs(filter.coeffs[k]);
        filter.error =
            std::max(tail, measured_error(symbol, filter, 4096));
        if (forced_degree > 0 || filter.error < tol) break;
        if (deg >= degree_cap)
            throw std::runtime_error(
                "make_chebyshev_filter: degree cap " +
                std::to_string(degree_cap) +
                " exceeded (error " + std::to_string(filter.error) +
                "); the required degree scales like 2^n * (hi - lo) / "
                "(edge width), so finer shells need a larger cap");
        deg = std::min(2 * deg, degree_cap);
    }
    return filter;
}

double evaluate_filter(const ChebyshevFilter& filter, double x) {
    const double y =
        (2.0 * x - (filter.hi + filter.lo)) / (filter.hi - filter.lo);
    return clenshaw(filter.coeffs, y);
}

Field apply_filter(const ChebyshevFilter& filter, const HamiltonianSpec& h,
                   const Field& f) {
    const double mid = 0.5 * (filter.hi + filter.lo);
    const double half = 0.5 * (filter.hi - filter.lo);
    const Field fp = in_representation(f, Representation::position);
    // Y = (H - mid) / half has spectrum in [-1, 1].
    const auto apply_y = [&](const CVector& v) {
        Field g(f.grid, Representation::position, v);
        return ((apply_H(g, h).values - mid * v) / half).eval();
    };
    // Forward recurrence: sum_k c_k T_k(Y) f.
    CVector t_prev = fp.values;
    CVector t_cur = apply_y(fp.values);
    CVector acc = filter.coeffs[0] * t_prev;
    if (filter.coeffs.size() > 1) acc += filter.coeffs[1] * t_cur;
    for (int k = 2; k < filter.coeffs.size(); ++k) {
        CVector t_next = 2.0 * apply_y(t_cur) - t_prev;
        acc += filter.coeffs[k] * t_next;
        t_prev = std::move(t_cur);
        t_cur = std::move(t_next);
    }
    return in_representation(
        Field(f.grid, Representation::position, std::move(acc)), f.rep);
}

WindowOperator::WindowOperator(HamiltonianSpec h, const ScalarSymbol& symbol,
                               double tol, int degree_cap, int forced_degree)
    : h_(std::move(h)),
      filter_(make_chebyshev_filter(symbol, h_.spectral_bounds.first,
                                    h_.spectral_bounds.second, tol,
                                    degree_cap, forced_degree)) {}

Field WindowOperator::operator()(const Field& f) const {
    return apply_filter(filter_, h_, f);
}

Field spectral_window(const Field& f, const HamiltonianSpec& h,
                      const DyadicWindow& w) {
    const ChebyshevFilter filter = make_chebyshev_filter(
        window_symbol(w), h.spectral_bounds.first, h.spectral_bounds.second,
        1e-6, 20000, w.filter_degree);
    return apply_filter(filter, h, f);
}

}  // namespace photonlab
