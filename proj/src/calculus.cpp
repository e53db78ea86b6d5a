#include "photonlab/calculus.hpp"

#include "photonlab/detail/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace photonlab {

namespace {

constexpr double kBoxFraction = 0.9;
constexpr double kInv2Pi = 1.0 / (2.0 * std::numbers::pi);

// Spread of the sampled A-spectrum of f: |<A>| + 6 sd + margin.
double dilation_spectrum_radius(const Field& f) {
    const Field fp = in_representation(f, Representation::position);
    const Field af = apply_A(fp);
    const double n2 = std::max(norm(fp) * norm(fp), 1e-300);
    const double mean = std::real(inner_product(fp, af)) / n2;
    const double second = std::real(inner_product(af, af)) / n2;
    const double var = std::max(second - mean * mean, 0.0);
    return std::abs(mean) + 6.0 * std::sqrt(var);
}

}  // namespace

namespace {

// Smallest radius containing all but mass_tol of the squared mass, for
// an arbitrary per-sample radius vector.
double mass_radius(const CVector& values, const RVector& r, double mass_tol) {
    const double total = values.squaredNorm();
    if (!(total > 0)) return 0.0;

    // Accumulate mass outside a radius by sorting indices by radius.
    std::vector<Eigen::Index> order(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&r](Eigen::Index a, Eigen::Index b) { return r[a] > r[b]; });
    double outside = 0.0;
    for (Eigen::Index i : order) {
        outside += std::norm(values[i]);
        if (outside / total > mass_tol) return r[i];
    }
    return 0.0;
}

}  // namespace

double support_radius(const Field& f, double mass_tol) {
    const Field fp = in_representation(f, Representation::position);
    return mass_radius(fp.values, fp.grid->position_radius(), mass_tol);
}

double momentum_support_radius(const Field& f, double mass_tol) {
    const Field fm = in_representation(f, Representation::momentum);
    return mass_radius(fm.values, fm.grid->momentum_magnitude(), mass_tol);
}

Field apply_dilation(const Field& f, double lambda,
                     double support_mass_tol) {
    if (lambda == 0.0) return f;
    const Grid& g = *f.grid;
    const double s = std::exp(lambda);
    if (lambda < 0) {
        // Result support expands by e^{-lambda}; it must stay in the box.
        const double rho = support_radius(f, support_mass_tol);
        if (rho / s >= kBoxFraction * g.half_length())
            throw std::domain_error(
                "apply_dilation: rescaled support exceeds box");
    } else {
        // Compression expands the momentum support by e^{lambda}; it must
        // stay below the Nyquist frequency or the resampling aliases.
        const double rho_k = momentum_support_radius(f, support_mass_tol);
        const double nyquist = std::numbers::pi / g.spacing();
        if (rho_k * s >= kBoxFraction * nyquist)
            throw std::domain_error(
                "apply_dilation: rescaled momentum support exceeds Nyquist");
    }
    Field out = in_representation(f, Representation::position);
    for (int a = 0; a < g.dim(); ++a)
        detail::resample_axis_scaled(out.values, g, a, s);
    out.values *= std::exp(0.5 * g.dim() * lambda);
    return in_representation(out, f.rep);
}

GroupQuadrature plan_group_quadrature(const SmoothStep& step, double scale,
                                      const Field& f,
                                      const GroupQuadratureOptions& opts) {
    if (!(scale > 0))
        throw std::invalid_argument("plan_group_quadrature: scale must be > 0");
    const Grid& g = *f.grid;

    GroupQuadrature plan;
    plan.tolerance = opts.tolerance;
    plan.support_mass_tol = opts.support_mass_tol;

    const double tail = step.fourier_truncation(opts.tolerance);

    // Box budget: group parameters mu = lambda/scale with mu < 0 expand
    // the support, which must stay inside the box; mu > 0 expands the
    // momentum support, which must stay below the Nyquist frequency.
    const double rho = std::max(support_radius(f, opts.support_mass_tol),
                                g.spacing());
    const double rho_k =
        std::max(momentum_support_radius(f, opts.support_mass_tol),
                 std::numbers::pi / g.half_length());
    const double nyquist = std::numbers::pi / g.spacing();
    const double headroom = std::min(kBoxFraction * g.half_length() / rho,
                                     kBoxFraction * nyquist / rho_k);
    if (!(headroom > 1.0))
        throw std::domain_error(
            "plan_group_quadrature: field support leaves no dilation range");
    const double box_cap = scale * std::log(headroom);

    plan.truncation = std::min({tail, box_cap, opts.hard_cap});
    plan.truncated_by_box = plan.truncation < tail;

    // Node spacing: the trapezoid periodizes the profile with period
    // 2 pi / spacing in the step argument; cover the sampled A-range of
    // f (divided by scale) plus the step's own extent.
    const double a_range = dilation_spectrum_radius(f) / scale +
                           std::abs(step.center()) + step.width() + 4.0;
    const double spacing_max = std::numbers::pi / a_range;
    int nodes = static_cast<int>(std::ceil(2.0 * plan.truncation / spacing_max));
    nodes += nodes & 1;  // even, so midpoint nodes are symmetric
    nodes = std::max(nodes, 2);
    if (nodes > opts.node_budget)
        throw std::runtime_error(
            "plan_group_quadrature: tolerance unattainable within node budget");
    plan.nodes = nodes;
    plan.spacing = 2.0 * plan.truncation / nodes;
    return plan;
}

namespace {

// Sum over quadrature nodes of weight(lambda) * e^{i lambda A / scale} f,
// with a fixed summation order for reproducibility.
Field group_sum(const Field& f, double scale, const GroupQuadrature& plan,
                const std::function<Complex(double)>& weight) {
    Field acc(f.grid, Representation::position);
    const Field fp = in_representation(f, Representation::position);
    for (int j = 0; j < plan.nodes; ++j) {
        const double lambda = plan.node(j);
        const Complex w = weight(lambda) * plan.spacing;
        if (std::abs(w) == 0.0) continue;
        acc.values += w * apply_dilation(fp, lambda / scale,
                                         plan.support_mass_tol).values;
    }
    return in_representation(acc, f.rep);
}

}  // namespace

Field function_of_A(const Field& f, const SmoothStep& step, double scale,
                    const GroupQuadratureOptions& opts) {
    const GroupQuadrature plan = plan_group_quadrature(step, scale, f, opts);
    Field out = group_sum(f, scale, plan, [&step](double l) {
        return kInv2Pi * step.derivative_fourier(l) / Complex(0.0, l);
    });
    out.values += 0.5 * f.values;  // (F(+inf) + F(-inf)) / 2
    return out;
}

Field derivative_of_A(const Field& f, const SmoothStep& step, double scale,
                      const GroupQuadratureOptions& opts) {
    const GroupQuadrature plan = plan_group_quadrature(step, scale, f, opts);
    return group_sum(f, scale, plan, [&step](double l) {
        return kInv2Pi * step.derivative_fourier(l);
    });
}

Field commutator_remainder_R2(const Field& f, const SmoothStep& step,
                              double big_r, double t, int n,
                              const GroupQuadratureOptions& opts) {
    if (!(big_r > 0) || !(t > 0) || n < 0)
        throw std::invalid_argument("commutator_remainder_R2: need R, t > 0, n >= 0");
    const double tau = big_r * t * std::exp2(-n);
    const auto half_power = [](double k) { return std::sqrt(k); };
    const Field g = apply_momentum_function(f, half_power);

    const GroupQuadrature plan = plan_group_quadrature(step, tau, g, opts);

    // lambda < 0: rho(l)/l is bounded; act on g = |p|^{1/2} f directly.
    const Field neg = group_sum(g, tau, plan, [&](double l) -> Complex {
        if (l >= 0) return Complex(0, 0);
        const double rho = std::expm1(0.5 * l / tau) - 0.5 * l / tau;
        return kInv2Pi * step.derivative_fourier(l) * (rho / l);
    });

    // lambda > 0: commute |p|^{1/2} to the left; the damped factor
    // rho(l) e^{-l/(2 tau)} stays bounded. Acts on f itself.
    Field pos = group_sum(f, tau, plan, [&](double l) -> Complex {
        if (l <= 0) return Complex(0, 0);
        const double u = 0.5 * l / tau;
        const double damped = 1.0 - std::exp(-u) * (1.0 + u);
        return kInv2Pi * step.derivative_fourier(l) * (damped / l);
    });
    pos = apply_momentum_function(pos, half_power);

    Field out = neg;
    out.values += in_representation(pos, out.rep).values;
    return in_representation(out, f.rep);
}

double heisenberg_check(const std::vector<std::pair<double, Field>>& traj,
                        const Observable& obs, const HamiltonianSpec& h) {
    if (traj.size() < 3)
        throw std::invalid_argument("heisenberg_check: need >= 3 time samples");
    const double dt = traj[1].first - traj[0].first;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double step = traj[i + 1].first - traj[i].first;
        if (std::abs(step - dt) > 1e-10 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument(
                "heisenberg_check: samples must be uniformly spaced");
    }

    auto expectation = [&obs](const std::pair<double, Field>& sample) {
        return std::real(inner_product(
            sample.second, obs.apply(sample.second, sample.first)));
    };

    double scale = 0.0;
    std::vector<double> values(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        values[i] = expectation(traj[i]);
        scale = std::max(scale, std::abs(values[i]));
    }
    scale = std::max(scale, 1e-12);

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double lhs = (values[i + 1] - values[i - 1]) / (2.0 * dt);

        const auto& [t, psi] = traj[i];
        const Field phi_psi = obs.apply(psi, t);
        const Field h_psi = apply_H(psi, h);
        Field comm = apply_H(phi_psi, h);
        comm.values = Complex(0, 1) *
                      (comm.values -
                       in_representation(obs.apply(h_psi, t), comm.rep).values);
        double rhs = std::real(inner_product(psi, comm));
        if (obs.time_dependent) {
            Field dphi = obs.apply(psi, t + dt);
            dphi.values -= in_representation(obs.apply(psi, t - dt),
                                             dphi.rep).values;
            dphi.values /= 2.0 * dt;
            rhs += std::real(inner_product(psi, dphi));
        }
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst / scale;
}

}  // namespace photonlab
