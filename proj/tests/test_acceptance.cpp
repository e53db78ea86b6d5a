// Acceptance gate: twelve end-to-end checks, one pass/fail line each.
// Exit code is the number of failed criteria.

#include "photonlab/calculus.hpp"
#include "photonlab/experiments.hpp"
#include "photonlab/inequalities.hpp"
#include "photonlab/operators.hpp"
#include "photonlab/propagator.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace photonlab;

namespace {

int failures = 0;

void report(int id, const std::string& label, bool pass,
            const std::string& detail) {
    std::printf("criterion %2d: %s  %s (%s)\n", id, pass ? "PASS" : "FAIL",
                label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void run(int id, const std::string& label,
         const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        report(id, label, pass, detail);
    } catch (const std::exception& e) {
        report(id, label, false, std::string("exception: ") + e.what());
    }
}

Field packet(const GridPtr& g, double k0, double width, double x0 = 0.0) {
    return normalized(gaussian_packet(g, &x0, width, &k0));
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Dense discretization of A (symmetrized) for the oracle in criterion 9.
struct DenseA {
    Eigen::VectorXd evals;
    Eigen::MatrixXcd evecs;
};

DenseA dense_a(const GridPtr& g) {
    const int n = g->points_per_axis();
    Eigen::MatrixXcd a(n, n);
    for (int j = 0; j < n; ++j) {
        Field e(g, Representation::position);
        e.values[j] = 1.0;
        a.col(j) = apply_A(e).values;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (a + a.adjoint()).eval());
    return {es.eigenvalues(), es.eigenvectors()};
}

CVector dense_function_of_a(const DenseA& a, const CVector& f,
                            const std::function<double(double)>& profile,
                            double scale) {
    Eigen::VectorXcd coeff = a.evecs.adjoint() * f;
    for (int i = 0; i < coeff.size(); ++i)
        coeff[i] *= profile(a.evals[i] / scale);
    return a.evecs * coeff;
}

// Exact free evolution by the momentum phase.
Field free_evolution(const Field& f, double t) {
    Field fm = to_momentum(f);
    const RVector& kmag = f.grid->momentum_magnitude();
    for (Eigen::Index i = 0; i < fm.values.size(); ++i)
        fm.values[i] *= std::polar(1.0, -t * kmag[i]);
    return in_representation(fm, f.rep);
}

double mean_position_1d(const Field& f) {
    const Field fp = in_representation(f, Representation::position);
    double acc = 0.0, mass = 0.0;
    for (Eigen::Index j = 0; j < fp.values.size(); ++j) {
        const double w = std::norm(fp.values[j]);
        acc += w * f.grid->position(static_cast<int>(j));
        mass += w;
    }
    return acc / mass;
}

}  // namespace

int main() {
    const PotentialSpec validated_well = gaussian_well(0.2, 2.0);

    run(1, "dilation covariance of |p|^alpha", [] {
        const GridPtr g = make_grid(1, 1024, 40.0);
        double worst = 0.0;
        for (double k0 : {3.5, 4.0, 4.5, 5.0})
            for (double w : {1.45, 1.5, 1.55, 1.6}) {
                const Field f = packet(g, k0, w);
                for (double alpha : {0.5, 1.0})
                    for (double lam : {std::log(2.0), -std::log(2.0),
                                       std::log(4.0), -std::log(4.0)}) {
                        const auto sym = [alpha](double k) {
                            return std::pow(k, alpha);
                        };
                        const Field lhs = apply_dilation(
                            apply_momentum_function(
                                apply_dilation(f, -lam), sym),
                            lam);
                        const Field rhs = apply_momentum_function(f, sym);
                        worst = std::max(
                            worst,
                            (lhs.values -
                             std::exp(-alpha * lam) * rhs.values)
                                    .norm() /
                                rhs.values.norm());
                    }
            }
        return std::make_pair(worst < 1e-6,
                              fmt("max error %.2e over 16 states", worst));
    });

    run(2, "commutator i[|p|^1/2, A] = 1/2 |p|^1/2", [] {
        const GridPtr g = make_grid(1, 512, 30.0);
        double worst = 0.0;
        for (double k0 : {2.5, 3.0, 3.5, 4.0})
            for (double w : {2.5, 3.0, 3.5, 4.0}) {
                const Field f = packet(g, k0, w);
                const auto sqrt_p = [](double k) { return std::sqrt(k); };
                const Field pf = apply_momentum_function(f, sqrt_p);
                const CVector comm =
                    Complex(0, 1) *
                    (apply_momentum_function(apply_A(f), sqrt_p).values -
                     apply_A(pf).values);
                worst = std::max(worst, (comm - 0.5 * pf.values).norm() /
                                            pf.values.norm());
            }
        return std::make_pair(worst < 1e-6,
                              fmt("max error %.2e over 16 states", worst));
    });

    run(3, "radial identity r^2(-Lap) = A^2 + 2iA - 3/4", [] {
        double worst = 0.0;
        int held = 0;
        for (int i = 0; i < 8; ++i) {
            const bool weighted = i >= 4;
            const double w =
                weighted ? 1.0 + 0.1 * (i - 4) : 0.9 + 0.1 * i;
            const GridPtr g = make_grid(3, 128, 12.0);
            const Field f = make_field(g, [w, weighted](const double* x) {
                const double r2 =
                    x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                const double amp = std::exp(-0.5 * r2 / (w * w));
                return Complex(weighted ? r2 * amp : amp, 0.0);
            });
            const InequalityReport rep = check_r2_laplacian_identity(f);
            if (rep.verdict == Verdict::holds) ++held;
            worst = std::max(worst,
                             std::max(rep.coarse_value, rep.fine_value));
        }
        return std::make_pair(held == 8 && worst < 1e-5,
                              fmt("%.0f/8 held, max residual %.2e",
                                  double(held), worst));
    });

    run(4, "Hardy bound ||p^-1 r^-1 u|| <= 2 ||u||", [] {
        InequalityOptions o;
        const InequalityReport rep = check_hardy_bound(o);
        const double gauss = rep.constants.at("gaussian_ratio");
        const bool pass = rep.fine_value <= 2.1 &&
                          std::abs(gauss - 1.2872) / 1.2872 < 1e-2 &&
                          rep.verdict == Verdict::holds;
        return std::make_pair(
            pass, fmt("max ratio %.4f, gaussian %.4f vs oracle 1.2872",
                      rep.fine_value, gauss));
    });

    run(5, "energy-shell momentum bound, n = 0..4", [&] {
        const InequalityReport rep =
            check_energy_shell_momentum(validated_well, 4, {});
        const double stability =
            std::abs(rep.fine_value - rep.coarse_value) /
            std::max(rep.coarse_value, 1e-12);
        const bool pass = rep.verdict != Verdict::violated &&
                          rep.verdict != Verdict::inapplicable &&
                          rep.constants.at("uniformity") <= 1.2 &&
                          stability <= 0.1;
        return std::make_pair(
            pass, fmt("c_max %.3f, uniformity %.3f, refinement drift %.1f%%",
                      rep.constants.at("c_max"),
                      rep.constants.at("uniformity"), 100.0 * stability));
    });

    run(6, "mutual domination of H and |p|", [] {
        double worst_free = 0.0;
        for (Domination dir : {Domination::H_over_p, Domination::p_over_H}) {
            const InequalityReport rep = estimate_domination(
                gaussian_well(0.0, 1.0), dir, false, {});
            worst_free =
                std::max(worst_free, std::abs(rep.fine_value - 1.0));
        }
        const InequalityReport sub = estimate_domination(
            gaussian_well(0.2, 2.0), Domination::H_over_p, false, {});
        const double m = sub.constants.at("m");
        const double drift = std::abs(sub.fine_value - sub.coarse_value);
        const InequalityReport super = estimate_domination(
            gaussian_well(2.0, 2.0), Domination::H_over_p, false, {});
        const bool pass = worst_free < 1e-6 && m > 0.0 && m < 1.0 &&
                          drift < 1e-3 &&
                          super.verdict == Verdict::violated;
        return std::make_pair(
            pass, fmt("free |m-1| %.1e, subcritical m %.4f (drift %.1e), "
                      "supercritical flagged",
                      worst_free, m, drift));
    });

    run(7, "support separation of dilated shells", [] {
        const InequalityReport rep = check_support_separation(
            {0.0, std::numbers::ln2 + 0.1}, 0, 0.02, {});
        const double leak0 = rep.constants.at("leak_lambda_0");
        const bool pass = rep.fine_value < 1e-6 && leak0 > 0.9;
        return std::make_pair(pass,
                              fmt("leak %.2e at ln2+0.1, %.3f at 0",
                                  rep.fine_value, leak0));
    });

    run(8, "propagator order, unitarity, group speed", [] {
        const GridPtr g = make_grid(1, 256, 20.0);
        const HamiltonianSpec hw =
            make_hamiltonian(g, gaussian_well(0.4, 2.0));
        const Field f = packet(g, 2.0, 1.5);
        const auto local_error = [&](double dt) {
            return (strang_step(f, hw, dt).values -
                    krylov_reference_step(f, hw, dt, 24).values)
                .norm();
        };
        const double order =
            std::log2(local_error(0.02) / local_error(0.01));

        Field psi = f;
        for (int s = 0; s < 10000; ++s) psi = strang_step(psi, hw, 0.005);
        const double drift = std::abs(norm(psi) - 1.0);

        const HamiltonianSpec hf =
            make_hamiltonian(g, gaussian_well(0.0, 1.0));
        const Field mover = packet(g, 4.0, 1.0, -4.0);
        EvolutionPlan plan;
        plan.dt = 0.02;
        plan.final_time = 6.0;
        const EvolutionResult res = evolve(mover, plan, hf);
        const double speed = (mean_position_1d(res.final_state) -
                              mean_position_1d(mover)) /
                             6.0;
        const bool pass = order >= 2.8 && drift < 1e-10 &&
                          speed >= 0.99 && speed <= 1.01;
        return std::make_pair(
            pass, fmt("order %.2f, drift %.1e over 1e4 steps, speed %.4f",
                      order, drift, speed));
    });

    run(9, "commutator remainder R2", [] {
        const GridPtr g = make_grid(1, 1024, 43.0);
        const Field f = packet(g, 3.0, 1.5);
        const auto sqrt_k = [](double k) { return std::sqrt(k); };
        const Field pf = apply_momentum_function(f, sqrt_k);

        // tau^-2 scaling over a decade of t.
        const SmoothStep inner =
            make_smooth_step(0.2, 0.8, StepDirection::up);
        std::vector<double> ts{2.0, 4.0, 8.0, 16.0, 32.0};
        std::vector<double> norms;
        for (double t : ts)
            norms.push_back(
                norm(commutator_remainder_R2(f, inner, 6.0, t, 0)));
        const double slope = std::log(norms.back() / norms.front()) /
                             std::log(ts.back() / ts.front());

        // Expansion closes against the dense-diagonalization oracle.
        const SmoothStep step =
            make_smooth_step(1.0, 0.8, StepDirection::up);
        const double big_r = 4.0, t = 2.0, tau = big_r * t;
        const DenseA a = dense_a(g);
        const CVector ff = dense_function_of_a(
            a, f.values, [&step](double s) { return step(s); }, tau);
        const CVector fpf = dense_function_of_a(
            a, pf.values, [&step](double s) { return step(s); }, tau);
        const Field ff_field(g, Representation::position, ff);
        const CVector direct =
            Complex(0, 1) *
            (apply_momentum_function(ff_field, sqrt_k).values - fpf);
        const CVector first = dense_function_of_a(
            a, pf.values,
            [&step](double s) { return step.derivative(s); }, tau);
        const Field r2 = commutator_remainder_R2(f, step, big_r, t, 0);
        const double closure =
            (direct - ((0.5 / tau) * first + r2.values)).norm() /
            pf.values.norm();

        const bool pass =
            slope >= -2.2 && slope <= -1.8 && closure < 5e-3;
        return std::make_pair(
            pass, fmt("log-log slope %.2f, oracle closure %.2e", slope,
                      closure));
    });

    run(10, "propagation estimate, n = 0..3, R in {5, 10}", [] {
        const GridPtr g = make_grid(1, 2048, 512.0);
        const HamiltonianSpec h =
            make_hamiltonian(g, gaussian_well(0.0, 1.0));
        double worst_ratio = 1e300, worst_bound = 0.0;
        for (double R : {5.0, 10.0})
            for (int n = 0; n <= 3; ++n) {
                RunConfig cfg;
                cfg.R = R;
                cfg.a = 1.4 * R;
                cfg.n_max = 4;
                cfg.t_start = 1.0;
                cfg.T = 32.0 * std::pow(2.0, n);
                cfg.dt = 0.06;
                cfg.samples_per_octave = 2;
                const double s = std::pow(2.0, -n);
                cfg.state.energy_lo = 0.55 * s;
                cfg.state.energy_hi = 0.95 * s;
                cfg.state.wavevector = 0.75 * s;
                cfg.state.filter_theta = 0.2;
                cfg.state.width = 8.0;
                const TimeSeries ts = run_propagation_estimate(
                    cfg, h, n, PropagationVariant::f_prime);
                if (ts.truncated)
                    return std::make_pair(false,
                                          std::string("series truncated: ") +
                                              ts.note);
                worst_bound = std::max(
                    worst_bound, ts.cumulative.back() / ts.normalizer);
                // Increment of the final doubling vs the one before it.
                const std::size_t m = ts.cumulative.size() - 1;
                const double last =
                    ts.cumulative[m] - ts.cumulative[m - 2];
                const double prev =
                    ts.cumulative[m - 2] - ts.cumulative[m - 4];
                worst_ratio = std::min(worst_ratio, prev / last);
            }
        const bool pass = worst_ratio >= 2.0 && worst_bound < 10.0;
        return std::make_pair(
            pass, fmt("min increment shrink %.2fx, max c(R) %.3f",
                      worst_ratio, worst_bound));
    });

    run(11, "maximal velocity tail decay", [] {
        // Free baseline at a = 1.3.
        const GridPtr g = make_grid(1, 512, 128.0);
        const HamiltonianSpec hf =
            make_hamiltonian(g, gaussian_well(0.0, 1.0));
        RunConfig cfg;
        cfg.R = 1.15;
        cfg.a = 1.3;
        cfg.n_max = 2;
        cfg.state.energy_filter = false;
        cfg.state.center = -10.0;
        cfg.state.width = 6.0;
        cfg.t_start = 2.5;
        cfg.T = 40.0;
        cfg.dt = 0.06;
        cfg.samples_per_octave = 1;
        const TimeSeries free_ts = run_maxvel(cfg, hf);
        const double free_tail = free_ts.tail_norm.back();

        // Interacting run over the validated binding well.
        const HamiltonianSpec hw =
            make_hamiltonian(g, gaussian_well(0.4, 2.0));
        cfg.R = 1.3;
        cfg.a = 1.5;
        cfg.t_start = 4.0;
        cfg.T = 32.0;
        const TimeSeries well_ts = run_maxvel(cfg, hw);
        const std::size_t m = well_ts.tail_norm.size() - 1;
        const double half = well_ts.tail_norm[m - 1];  // T/2 sample
        const double full = well_ts.tail_norm[m];
        const bool pass = free_tail < 0.05 && full <= 0.75 * half &&
                          full < 0.05 && !free_ts.truncated &&
                          !well_ts.truncated;
        return std::make_pair(
            pass, fmt("free tail(40) %.4f; well tail %.4f -> %.4f over "
                      "the last doubling",
                      free_tail, half, full));
    });

    run(12, "dyadic assembly closes, |Q| halves per doubling", [] {
        const GridPtr g = make_grid(1, 512, 128.0);
        const HamiltonianSpec h =
            make_hamiltonian(g, gaussian_well(0.0, 1.0));
        RunConfig cfg;
        cfg.R = 1.05;
        cfg.a = 1.5;
        cfg.n_max = 4;
        cfg.state.profile = StateProfile::power_law;
        cfg.state.tail_power = 0.5;
        cfg.state.width = 2.0;
        cfg.state.energy_filter = false;
        cfg.t_start = 2.0;
        cfg.T = 32.0;
        cfg.dt = 0.06;
        cfg.samples_per_octave = 1;
        const DyadicReport rep = run_dyadic_assembly(cfg, h);
        double max_closure = 0.0;
        for (const DyadicSample& s : rep.samples)
            max_closure = std::max(max_closure, s.closure);
        const std::size_t m = rep.samples.size() - 1;
        const double r1 =
            std::abs(rep.samples[m - 2].q) / std::abs(rep.samples[m - 1].q);
        const double r2 =
            std::abs(rep.samples[m - 1].q) / std::abs(rep.samples[m].q);
        const bool halves = r1 >= 1.7 && r1 <= 2.3 && r2 >= 1.7 &&
                            r2 <= 2.3;
        const bool pass =
            max_closure < 0.02 && halves && !rep.truncated;
        return std::make_pair(
            pass, fmt("max closure %.2e, |Q| doubling ratios %.2f, %.2f",
                      max_closure, r1, r2));
    });

    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures;
}
