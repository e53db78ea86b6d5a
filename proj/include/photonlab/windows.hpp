#pragma once

#include "photonlab/grid.hpp"
#include "photonlab/operators.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace photonlab {

/// Smoothed indicator of the dyadic shell [2^{-n-1}, 2^{-n}].
///
/// Each edge e carries a transition of width theta*e, shared exactly with
/// the neighboring shell, and the two edge profiles are the sine/cosine
/// halves of one crossover so that the squares of adjacent windows sum to
/// 1 across the overlap. Consequences: sum_n w_n^2 (+ tails) = 1
/// identically, and windows with |n - m| >= 2 have disjoint supports for
/// theta <= 1/4.
struct DyadicWindow {
    int n = 0;             // shell index, >= 0
    double theta = 0.25;   // smoothing fraction, in (0, 1/4]
    int filter_degree = 0; // forced Chebyshev degree; 0 = automatic

    std::pair<double, double> interval() const {
        return {std::exp2(-n - 1), std::exp2(-n)};
    }
};

using ScalarSymbol = std::function<double(double)>;

/// Scalar profile of the smoothed shell indicator.
ScalarSymbol window_symbol(const DyadicWindow& w);

/// Smoothed indicator of a general interval [lo, hi] with the same
/// crossover construction (edge widths theta*lo, theta*hi).
ScalarSymbol interval_symbol(double lo, double hi, double theta);

/// Aggregate tail below the lowest covered shell (completes the
/// partition of unity below 2^{-n_max-1}).
ScalarSymbol low_tail_symbol(int n_max, double theta);

/// Aggregate tail above the highest covered shell (above 1).
ScalarSymbol high_tail_symbol(double theta);

/// Chebyshev approximation of a scalar symbol on [lo, hi].
struct ChebyshevFilter {
    double lo = 0.0;
    double hi = 1.0;
    RVector coeffs;      // Chebyshev-basis coefficients
    double error = 0.0;  // measured uniform approximation error
};

/// Builds a filter whose uniform error on [lo, hi] is below `tol`,
/// doubling the degree up to `degree_cap`. A non-zero `forced_degree`
/// skips the search. Throws when the cap is hit, reporting the 2^n
/// scaling of the required degree.
ChebyshevFilter make_chebyshev_filter(const ScalarSymbol& symbol, double lo,
                                      double hi, double tol = 1e-6,
                                      int degree_cap = 20000,
                                      int forced_degree = 0);

/// Evaluates the filter polynomial at a scalar argument (Clenshaw).
double evaluate_filter(const ChebyshevFilter& filter, double x);

/// Applies filter(H) to a field via the operator Clenshaw recurrence.
Field apply_filter(const ChebyshevFilter& filter, const HamiltonianSpec& h,
                   const Field& f);

/// Reusable smoothed spectral projector symbol(H) for a fixed
/// Hamiltonian; plans the Chebyshev filter once at construction.
class WindowOperator {
public:
    WindowOperator(HamiltonianSpec h, const ScalarSymbol& symbol,
                   double tol = 1e-6, int degree_cap = 20000,
                   int forced_degree = 0);

    Field operator()(const Field& f) const;
    const ChebyshevFilter& filter() const { return filter_; }

private:
    HamiltonianSpec h_;
    ChebyshevFilter filter_;
};

/// One-shot smoothed spectral window E~_n(H) f.
Field spectral_window(const Field& f, const HamiltonianSpec& h,
                      const DyadicWindow& w);

}  // namespace photonlab
