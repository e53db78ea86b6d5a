#pragma once

#include "photonlab/grid.hpp"
#include "photonlab/operators.hpp"

namespace photonlab {

struct FractionalPowerOptions {
    double rel_tol = 1e-9;     // quadrature truncation target
    double solver_tol = 1e-11; // resolvent solve, relative residual
    int max_solver_iter = 5000;
    /// Smallest spectral value carrying mass (guides the quadrature for
    /// the inverse power); 0 selects pi / (4 L).
    double spectrum_floor = 0.0;
};

/// H^alpha f for alpha in {-1/2, +1/2} via the resolvent representation
///   H^{1/2} = (2/pi) int_0^inf H (t^2 + H)^{-1} dt,
///   H^{-1/2} = (2/pi) int_0^inf (t^2 + H)^{-1} dt,
/// discretized by an exponentially convergent trapezoid rule in ln t with
/// preconditioned conjugate-gradient resolvent solves.
/// Requires H >= 0 (no bound states); for alpha = -1/2 the zero
/// momentum mode must carry < 1e-6 of the squared mass.
Field fractional_power_H(const Field& f, const HamiltonianSpec& h,
                         double alpha,
                         const FractionalPowerOptions& opts = {});

}  // namespace photonlab
