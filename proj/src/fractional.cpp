#include "photonlab/fractional.hpp"

#include "photonlab/detail/fourier.hpp"
#include "photonlab/detail/lanczos.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace photonlab {

Field fractional_power_H(const Field& f, const HamiltonianSpec& h,
                         double alpha, const FractionalPowerOptions& opts) {
    if (alpha != 0.5 && alpha != -0.5)
        throw std::invalid_argument(
            "fractional_power_H: alpha must be +1/2 or -1/2");
    // The padded spectral_bounds.first is conservative by construction
    // (it dips below zero even for V = 0); discrete eigenvalues found by
    // make_hamiltonian are the authoritative negativity signal.
    if (!h.bound_states.empty() || h.resonance_margin < 0)
        throw std::domain_error(
            "fractional_power_H: negative spectrum present");
    if (f.grid != h.grid && !(*f.grid == *h.grid))
        throw std::invalid_argument("fractional_power_H: grid mismatch");

    Field fm = in_representation(f, Representation::momentum);
    if (alpha < 0) {
        const double total = fm.values.squaredNorm();
        if (total > 0 && std::norm(fm.values[0]) / total >= 1e-6)
            throw std::domain_error(
                "fractional_power_H: inverse power with >= 1e-6 relative "
                "mass on the zero momentum mode");
        fm.values[0] = 0.0;
    }
    const Field fp = to_position(fm);

    const double floor = opts.spectrum_floor > 0
                             ? opts.spectrum_floor
                             : std::numbers::pi / (4.0 * h.grid->half_length());
    const double x_hi = std::max(h.spectral_bounds.second, 1.0);
    const double eps = opts.rel_tol * std::sqrt(floor);
    const double u_lo = std::log(0.5 * std::numbers::pi * eps);
    const double u_hi = std::log(x_hi / eps) + 1.0;
    const double target_du = 0.35;
    const int nodes =
        static_cast<int>(std::ceil((u_hi - u_lo) / target_du)) + 1;
    const double du = (u_hi - u_lo) / (nodes - 1);

    const RVector& kmag = h.grid->momentum_magnitude();
    const double shift = std::max(0.0, h.potential.coupling);

    Field acc(h.grid, Representation::position);
    CVector guess = CVector::Zero(h.grid->size());
    // Sweep from large t (well-conditioned) downward, warm-starting each
    // solve with the previous solution.
    for (int i = nodes - 1; i >= 0; --i) {
        const double u = u_lo + i * du;
        const double t = std::exp(u);
        const double t2 = t * t;

        const detail::ApplyFn apply = [&](const CVector& v) {
            Field g(h.grid, Representation::position, v);
            return (apply_H(g, h).values + t2 * v).eval();
        };
        const detail::ApplyFn precond = [&](const CVector& v) {
            Field g(h.grid, Representation::position, v);
            Field gm = to_momentum(g);
            for (Eigen::Index j = 0; j < gm.values.size(); ++j)
                gm.values[j] /= t2 + kmag[j] + shift;
            return to_position(gm).values;
        };

        CVector rhs = fp.values - apply(guess);
        const CVector correction =
            detail::pcg(apply, precond, rhs, opts.solver_tol,
                        opts.max_solver_iter);
        guess += correction;  // y = (t^2 + H)^{-1} f

        // Trapezoid in u; integrand (2/pi) e^u * node value.
        double w = (2.0 / std::numbers::pi) * t * du;
        if (i == 0 || i == nodes - 1) w *= 0.5;
        if (alpha > 0) {
            // H y = f - t^2 y, but the direct application avoids the
            // catastrophic cancellation of that difference at large t
            // (the t-weight amplifies rounding in t^2 y).
            Field y(h.grid, Representation::position, guess);
            acc.values += w * apply_H(y, h).values;
        } else {
            acc.values += w * guess;
        }
    }
    return in_representation(acc, f.rep);
}

}  // namespace photonlab
