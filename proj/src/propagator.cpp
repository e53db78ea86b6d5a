#include "photonlab/propagator.hpp"

#include "photonlab/calculus.hpp"
#include "photonlab/detail/lanczos.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace photonlab {

namespace {

void half_potential_phase(Field& f, const HamiltonianSpec& h, double dt) {
    if (h.potential.coupling == 0.0) return;
    const RVector& r = f.grid->position_radius();
    for (Eigen::Index i = 0; i < f.values.size(); ++i)
        f.values[i] *= std::polar(1.0, -0.5 * dt * h.potential.value(r[i]));
}

}  // namespace

Field strang_step(const Field& f, const HamiltonianSpec& h, double dt) {
    Field out = in_representation(f, Representation::position);
    half_potential_phase(out, h, dt);
    out = to_momentum(out);
    const RVector& kmag = f.grid->momentum_magnitude();
    for (Eigen::Index i = 0; i < out.values.size(); ++i)
        out.values[i] *= std::polar(1.0, -dt * kmag[i]);
    out = to_position(out);
    half_potential_phase(out, h, dt);
    return in_representation(out, f.rep);
}

Field krylov_reference_step(const Field& f, const HamiltonianSpec& h,
                            double dt, int m) {
    if (m < 8)
        throw std::invalid_argument(
            "krylov_reference_step: subspace dimension must be >= 8");
    const Field fp = in_representation(f, Representation::position);
    const double nf = fp.values.norm();
    if (!(nf > 0)) return f;

    const detail::ApplyFn apply = [&h](const CVector& v) {
        Field g(h.grid, Representation::position, v);
        return apply_H(g, h).values;
    };

    for (int dim = m; dim <= 4 * m; dim *= 2) {
        const detail::LanczosRun run =
            detail::lanczos(apply, fp.values, dim, true);
        const int steps = run.steps;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
        for (int i = 0; i < steps; ++i) {
            t(i, i) = run.alpha[i];
            if (i + 1 < steps) {
                t(i, i + 1) = run.beta[i];
                t(i + 1, i) = run.beta[i];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        Eigen::VectorXcd phase(steps);
        for (int i = 0; i < steps; ++i)
            phase[i] = std::polar(1.0, -dt * es.eigenvalues()[i]);
        const Eigen::VectorXcd w =
            es.eigenvectors() *
            (phase.array() * es.eigenvectors().row(0).transpose().array())
                .matrix();

        // A-posteriori estimate: coupling out of the subspace times the
        // weight the exponential puts on the last basis vector.
        const bool breakdown = steps < dim;
        const double estimate =
            breakdown ? 0.0 : run.beta[steps - 1] * std::abs(w[steps - 1]) *
                              std::abs(dt);
        if (estimate < 1e-10 || breakdown) {
            CVector out = CVector::Zero(fp.values.size());
            for (int i = 0; i < steps; ++i) out += w[i] * run.basis[i];
            out *= nf;
            return in_representation(
                Field(f.grid, Representation::position, std::move(out)),
                f.rep);
        }
    }
    throw std::runtime_error(
        "krylov_reference_step: error estimator stayed above 1e-10; "
        "use a smaller dt");
}

EvolutionResult evolve(const Field& f0, const EvolutionPlan& plan,
                       const HamiltonianSpec& h) {
    if (!(plan.dt > 0) || plan.final_time < 0)
        throw std::invalid_argument("evolve: need dt > 0 and T >= 0");
    if (plan.dt * std::abs(h.spectral_bounds.second) >= 0.5)
        throw std::invalid_argument(
            "evolve: dt * lambda_max >= 0.5 violates the plan invariant");
    if (plan.enforce_no_wrap &&
        support_radius(f0) + plan.final_time >=
            0.9 * f0.grid->half_length())
        throw std::invalid_argument(
            "evolve: final time exceeds the box no-wrap budget");

    EvolutionResult result;
    Field psi = in_representation(f0, Representation::position);
    const long steps = std::lround(plan.final_time / plan.dt);
    const double dt = steps > 0 ? plan.final_time / steps : plan.dt;

    auto emit = [&](long step, double t) -> bool {
        const bool last = step == steps;
        if (plan.callback &&
            (step % std::max(plan.callback_stride, 1) == 0 || last)) {
            try {
                plan.callback(psi, t);
            } catch (const std::exception& e) {
                result.completed = false;
                result.failure = e.what();
                return false;
            }
        }
        if (plan.checkpoint_sink && plan.checkpoint_stride > 0 &&
            (step % plan.checkpoint_stride == 0 || last))
            plan.checkpoint_sink(psi, t);
        return true;
    };

    if (!emit(0, 0.0)) {
        result.final_state = psi;
        return result;
    }
    for (long s = 1; s <= steps; ++s) {
        psi = plan.scheme == Scheme::strang
                  ? strang_step(psi, h, dt)
                  : krylov_reference_step(psi, h, dt, plan.krylov_dim);
        result.reached_time = s * dt;
        if (!emit(s, result.reached_time)) break;
    }
    result.final_state = std::move(psi);
    return result;
}

}  // namespace photonlab
