#include "photonlab/experiments.hpp"

#include "photonlab/detail/lanczos.hpp"
#include "photonlab/fractional.hpp"
#include "photonlab/propagator.hpp"
#include "photonlab/windows.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <utility>

namespace photonlab {

namespace {

constexpr double kBoundaryMassLimit = 1e-4;
// Spectrally filtered states carry power-law position tails; let the
// dilation planner ignore this much squared mass (the resampling wrap
// mask absorbs it).
constexpr double kSupportMassTol = 1e-4;

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

void check_time_step(const RunConfig& cfg, const HamiltonianSpec& h) {
    const double lambda_max = h.spectral_bounds.second;
    if (cfg.dt * lambda_max >= 0.5)
        throw std::invalid_argument(
            "time step too large: dt * lambda_max = " +
            fmt("%.3g", cfg.dt * lambda_max) + " must stay below 1/2");
}

Field advance(Field psi, const HamiltonianSpec& h, double from, double to,
              double dt) {
    const double span = to - from;
    if (span <= 0.0) return psi;
    const int steps = std::max(1, static_cast<int>(std::ceil(span / dt - 1e-9)));
    const double step = span / steps;
    for (int s = 0; s < steps; ++s) psi = strang_step(psi, h, step);
    return in_representation(psi, Representation::position);
}

Field minus(const Field& a, const Field& b) {
    Field out = in_representation(a, Representation::position);
    out.values -= in_representation(b, Representation::position).values;
    return out;
}

// Spectrally filtered states carry static power-law position tails out
// to the box boundary, which no dilation can represent. The generator
// splits therefore act on a copy smoothly tapered near the boundary;
// complements are formed by subtraction, so decompositions stay exact.
Field boundary_taper(const Field& f) {
    const double half = f.grid->half_length();
    const SmoothStep s =
        make_smooth_step(0.62 * half, 0.08 * half, StepDirection::down);
    Field out = in_representation(f, Representation::position);
    const RVector& radius = out.grid->position_radius();
    for (Eigen::Index i = 0; i < out.values.size(); ++i)
        out.values[i] *= s(radius[i]);
    return out;
}

std::string wrap_note(double t, double limit) {
    return "wrap-around detected at t = " + fmt("%.6g", t) +
           " (boundary mass above " + fmt("%.3g", limit) +
           "); series truncated";
}

// Power-law envelopes occupy the boundary permanently, so the wrap
// monitor watches for growth over the initial boundary mass rather than
// a fixed absolute level.
double wrap_limit(const Field& psi0) {
    return std::max(kBoundaryMassLimit, 3.0 * boundary_mass(psi0));
}

Field initial_profile(const RunConfig& cfg, const GridPtr& grid) {
    double center[3] = {cfg.state.center, 0.0, 0.0};
    double wavevector[3] = {cfg.state.wavevector, 0.0, 0.0};
    if (cfg.state.profile == StateProfile::gaussian)
        return normalized(
            gaussian_packet(grid, center, cfg.state.width, wavevector));
    const double w = cfg.state.width;
    const double half_power = 0.5 * cfg.state.tail_power;
    const double c0 = cfg.state.center;
    const double k0 = cfg.state.wavevector;
    const int dim = grid->dim();
    return normalized(make_field(grid, [&, dim](const double* x) {
        double r2 = (x[0] - c0) * (x[0] - c0);
        for (int a = 1; a < dim; ++a) r2 += x[a] * x[a];
        const double amp = std::pow(1.0 + r2 / (w * w), -half_power);
        return std::polar(amp, k0 * x[0]);
    }));
}

}  // namespace

double RunConfig::margin() const {
    return std::min(0.3, 0.5 * (a - R) / (a + R));
}

void RunConfig::validate() const {
    std::vector<std::string> bad;
    if (!(R > 1.0))
        bad.push_back("R must exceed 1 (R = " + fmt("%.6g", R) + ")");
    if (!(a > R))
        bad.push_back("cone threshold must satisfy 1 < R < a (R = " +
                      fmt("%.6g", R) + ", a = " + fmt("%.6g", a) + ")");
    if (!(eps > 0.0))
        bad.push_back("weight exponent eps must be positive (eps = " +
                      fmt("%.6g", eps) + ")");
    if (n_max < 0) bad.push_back("n_max must be non-negative");
    if (!(t_start > 0.0)) bad.push_back("t_start must be positive");
    if (!(T >= t_start)) bad.push_back("T must be at least t_start");
    if (!(dt > 0.0)) bad.push_back("dt must be positive");
    if (samples_per_octave < 1)
        bad.push_back("samples_per_octave must be at least 1");
    if (!(theta > 0.0) || theta > 0.25)
        bad.push_back("window smoothing theta must lie in (0, 1/4]");
    if (!(quad_tolerance > 0.0))
        bad.push_back("quad_tolerance must be positive");
    if (!(state.width > 0.0)) bad.push_back("state width must be positive");
    if (!(state.tail_power > 0.0))
        bad.push_back("state tail_power must be positive");
    if (!(state.energy_lo > 0.0) || !(state.energy_hi > state.energy_lo))
        bad.push_back("energy interval must satisfy 0 < energy_lo < energy_hi");
    if (!(state.filter_theta > 0.0) || state.filter_theta >= 0.5)
        bad.push_back("energy filter edge fraction must lie in (0, 1/2)");

    if (bad.empty()) {
        // The complementary shell cutoff and the cone step must have
        // disjoint supports in b = |x|/t; verify the construction.
        const SmoothStep fa = cone_profile(*this);
        const SmoothStep s1 = make_smooth_step(1.0, margin(),
                                               StepDirection::up);
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double b = 2.0 * a * i / 2000.0;
            worst = std::max(worst, (1.0 - s1(b / R)) * fa(b));
        }
        if (worst > 0.0)
            bad.push_back("cone and shell steps overlap (margin too wide)");
    }

    if (!bad.empty()) {
        std::string msg = "invalid run configuration: ";
        for (std::size_t i = 0; i < bad.size(); ++i) {
            if (i) msg += "; ";
            msg += bad[i];
        }
        throw std::invalid_argument(msg);
    }
}

SmoothStep cone_profile(const RunConfig& cfg) {
    return make_smooth_step(cfg.a, cfg.margin() * cfg.a, StepDirection::up);
}

Field apply_cone(const Field& f, const SmoothStep& s, double t, int power) {
    Field out = in_representation(f, Representation::position);
    const RVector& radius = out.grid->position_radius();
    for (Eigen::Index i = 0; i < out.values.size(); ++i) {
        double w = s(radius[i] / t);
        for (int p = 1; p < power; ++p) w *= s(radius[i] / t);
        out.values[i] *= w;
    }
    return out;
}

Field shell_step_of_A(const Field& f, double big_r, double margin, int n,
                      double t, const GroupQuadratureOptions& opts) {
    const SmoothStep s = make_smooth_step(1.0, margin, StepDirection::up);
    return in_representation(
        function_of_A(f, s, big_r * t * std::exp2(-n), opts),
        Representation::position);
}

Field shell_bump_of_A(const Field& f, double big_r, double margin, int n,
                      double t, const GroupQuadratureOptions& opts) {
    const SmoothStep s = make_smooth_step(1.0, margin, StepDirection::up);
    return in_representation(
        derivative_of_A(f, s, big_r * t * std::exp2(-n), opts),
        Representation::position);
}

std::vector<double> log_time_mesh(double t_start, double big_t,
                                  int per_octave) {
    if (!(t_start > 0.0) || !(big_t >= t_start) || per_octave < 1)
        throw std::invalid_argument(
            "log_time_mesh requires 0 < t_start <= T and per_octave >= 1");
    std::vector<double> out;
    const double octaves = std::log2(big_t / t_start);
    const int last = static_cast<int>(std::ceil(octaves * per_octave - 1e-9));
    for (int j = 0; j <= last; ++j) {
        const double t = t_start * std::exp2(static_cast<double>(j) /
                                             per_octave);
        out.push_back(std::min(t, big_t));
    }
    out.back() = big_t;
    return out;
}

PreparedState prepare_initial_state(const RunConfig& cfg,
                                    const HamiltonianSpec& h) {
    cfg.validate();
    const Field profile = initial_profile(cfg, h.grid);

    Field filtered = profile;
    double mass = 1.0;
    if (cfg.state.energy_filter) {
        const WindowOperator window(
            h, interval_symbol(cfg.state.energy_lo, cfg.state.energy_hi,
                               cfg.state.filter_theta));
        filtered = window(profile);
        mass = norm(filtered) * norm(filtered);
        if (mass < 1e-6)
            throw std::runtime_error(
                "energy filter annihilates the profile: surviving mass " +
                fmt("%.3g", mass) + " is below 1e-6");
    }

    PreparedState out;
    out.filtered_mass = mass;
    out.psi = in_representation(
        normalized(project_continuous(filtered, h)),
        Representation::position);
    out.energy_mean = std::real(inner_product(out.psi,
                                              apply_H(out.psi, h)));
    Weight w;
    w.kind = WeightKind::x_power;
    w.exponent = 1.0 + cfg.eps;
    out.weighted_norm_x = weighted_norm(out.psi, w);
    return out;
}

TimeSeries run_maxvel(const RunConfig& cfg, const HamiltonianSpec& h) {
    cfg.validate();
    check_time_step(cfg, h);
    const PreparedState prep = prepare_initial_state(cfg, h);
    const SmoothStep fa = cone_profile(cfg);
    const double m = cfg.margin();
    GroupQuadratureOptions qopts;
    qopts.tolerance = cfg.quad_tolerance;
    qopts.support_mass_tol = kSupportMassTol;

    // Shell projections commute with the evolution, so filter once at
    // t = 0 and carry one trajectory per shell.
    std::vector<Field> chi;
    for (int n = 0; n <= cfg.n_max; ++n)
        chi.push_back(in_representation(
            spectral_window(prep.psi, h, DyadicWindow{n, cfg.theta, 0}),
            Representation::position));

    TimeSeries ts;
    Field psi = prep.psi;
    const double wrap = wrap_limit(psi);
    double now = 0.0;
    for (const double t : log_time_mesh(cfg.t_start, cfg.T,
                                        cfg.samples_per_octave)) {
        psi = advance(psi, h, now, t, cfg.dt);
        for (Field& c : chi) c = advance(std::move(c), h, now, t, cfg.dt);
        now = t;
        if (boundary_mass(psi) > wrap) {
            ts.truncated = true;
            ts.note = wrap_note(t, wrap);
            break;
        }
        ts.norm_drift = std::max(ts.norm_drift, std::abs(norm(psi) - 1.0));
        ts.times.push_back(t);

        Weight w;
        w.kind = WeightKind::step_of_x_over_t;
        w.step = &fa;
        w.time = t;
        ts.tail_norm.push_back(weighted_norm(psi, w));

        std::vector<double> row, row_out, row_in;
        for (int n = 0; n <= cfg.n_max; ++n) {
            row.push_back(weighted_norm(chi[n], w));
            const Field fn = shell_step_of_A(boundary_taper(chi[n]), cfg.R,
                                             m, n, t, qopts);
            row_out.push_back(norm(apply_cone(fn, fa, t)));
            row_in.push_back(norm(apply_cone(minus(chi[n], fn), fa, t)));
        }
        ts.shells.push_back(std::move(row));
        ts.shells_out.push_back(std::move(row_out));
        ts.shells_in.push_back(std::move(row_in));
    }
    return ts;
}

TimeSeries run_propagation_estimate(const RunConfig& cfg,
                                    const HamiltonianSpec& h, int n,
                                    PropagationVariant variant) {
    cfg.validate();
    check_time_step(cfg, h);
    if (n < 0 || n > cfg.n_max)
        throw std::invalid_argument("shell index outside 0..n_max");
    const PreparedState prep = prepare_initial_state(cfg, h);
    const Field chi0 = in_representation(
        spectral_window(prep.psi, h, DyadicWindow{n, cfg.theta, 0}),
        Representation::position);
    const double shell_mass = norm(chi0);
    if (shell_mass < 1e-4)
        throw std::runtime_error(
            "shell filter annihilates the initial state (shell " +
            fmt("%.0f", static_cast<double>(n)) + ", norm " +
            fmt("%.3g", shell_mass) + ")");

    TimeSeries ts;
    if (variant == PropagationVariant::f) {
        // <chi0, <A> chi0> with <A> = sqrt(1 + A^2), by Lanczos quadrature.
        const GridPtr grid = h.grid;
        const detail::ApplyFn apply_a = [grid](const CVector& v) {
            return apply_A(Field(grid, Representation::position, v)).values;
        };
        ts.normalizer = grid->cell_volume() *
                        detail::lanczos_quadratic_form(
                            apply_a, chi0.values,
                            [](double x) { return std::sqrt(1.0 + x * x); });
    } else {
        ts.normalizer = shell_mass * shell_mass;
    }

    const double m = cfg.margin();
    GroupQuadratureOptions qopts;
    qopts.tolerance = cfg.quad_tolerance;
    qopts.support_mass_tol = kSupportMassTol;
    const double split = std::exp2(n) / cfg.R;
    if (split > cfg.t_start && split <= cfg.T)
        ts.split_time = split;
    else if (variant == PropagationVariant::bump)
        ts.note = "split time 2^n / R = " + fmt("%.4g", split) +
                  " lies outside the sampled range";

    Field chi = chi0;
    const double wrap = wrap_limit(chi0);
    double now = 0.0, cum = 0.0, prev_g = 0.0, prev_t = 0.0;
    bool first = true;
    for (const double t : log_time_mesh(cfg.t_start, cfg.T,
                                        cfg.samples_per_octave)) {
        chi = advance(std::move(chi), h, now, t, cfg.dt);
        now = t;
        if (boundary_mass(chi) > wrap) {
            ts.truncated = true;
            ts.note = wrap_note(t, wrap);
            break;
        }
        ts.norm_drift = std::max(ts.norm_drift,
                                 std::abs(norm(chi) / shell_mass - 1.0));
        const Field tapered = boundary_taper(chi);
        const Field y = variant == PropagationVariant::f
                            ? shell_step_of_A(tapered, cfg.R, m, n, t, qopts)
                            : shell_bump_of_A(tapered, cfg.R, m, n, t, qopts);
        const double g = norm(y) * norm(y);
        if (!first) cum += 0.5 * (prev_g + g) * std::log(t / prev_t);
        ts.times.push_back(t);
        ts.integrand.push_back(g);
        ts.cumulative.push_back(cum);
        if (ts.split_time > 0.0 && t <= ts.split_time)
            ts.cumulative_at_split = cum;
        prev_g = g;
        prev_t = t;
        first = false;
    }
    return ts;
}

DyadicReport run_dyadic_assembly(const RunConfig& cfg,
                                 const HamiltonianSpec& h) {
    cfg.validate();
    check_time_step(cfg, h);
    const PreparedState prep = prepare_initial_state(cfg, h);
    const GridPtr& grid = h.grid;

    // Square-root calculus of H on the positive spectrum. A dense
    // eigendecomposition covers one-dimensional grids exactly (and keeps
    // working when the well binds); otherwise fall back to the resolvent
    // quadrature, which needs H >= 0.
    std::function<Field(const Field&, double)> root;
    if (grid->dim() == 1 && grid->size() <= 4096) {
        const Eigen::Index size = grid->size();
        Eigen::MatrixXcd mat(size, size);
        Field e(grid, Representation::position);
        for (Eigen::Index j = 0; j < size; ++j) {
            e.values.setZero();
            e.values[j] = 1.0;
            mat.col(j) =
                in_representation(apply_H(e, h), Representation::position)
                    .values;
        }
        mat = 0.5 * (mat + mat.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat);
        const auto vals = std::make_shared<Eigen::VectorXd>(es.eigenvalues());
        const auto vecs =
            std::make_shared<Eigen::MatrixXcd>(es.eigenvectors());
        root = [vals, vecs](const Field& f, double alpha) {
            Field out = in_representation(f, Representation::position);
            Eigen::VectorXcd c = vecs->adjoint() * out.values;
            for (Eigen::Index i = 0; i < c.size(); ++i)
                c[i] = (*vals)[i] > 1e-10
                           ? c[i] * std::pow((*vals)[i], alpha)
                           : Complex(0.0, 0.0);
            out.values = *vecs * c;
            return out;
        };
    } else {
        if (!h.bound_states.empty())
            throw std::runtime_error(
                "fractional powers unavailable: the Hamiltonian has bound "
                "states and the grid is too large for the dense spectral "
                "calculus");
        root = [&h](const Field& f, double alpha) {
            return in_representation(fractional_power_H(f, h, alpha),
                                     Representation::position);
        };
    }

    // Squared dyadic windows: adjacent squares sum to one, so the shell
    // decomposition of the identity is exact up to the tail remainder.
    std::vector<WindowOperator> wins;
    wins.reserve(cfg.n_max + 1);
    for (int n = 0; n <= cfg.n_max; ++n) {
        const ScalarSymbol base = window_symbol(DyadicWindow{n, cfg.theta, 0});
        wins.emplace_back(h, [base](double x) {
            const double v = base(x);
            return v * v;
        });
    }

    DyadicReport report;
    double covered = 0.0;
    for (const auto& w : wins)
        covered += std::real(inner_product(prep.psi, w(prep.psi)));
    report.neglected_mass = 1.0 - covered;

    const SmoothStep fa = cone_profile(cfg);
    const double m = cfg.margin();
    GroupQuadratureOptions qopts;
    qopts.tolerance = cfg.quad_tolerance;
    qopts.support_mass_tol = kSupportMassTol;

    Field psi = prep.psi;
    const double wrap = wrap_limit(psi);
    double now = 0.0;
    for (const double t : log_time_mesh(cfg.t_start, cfg.T,
                                        cfg.samples_per_octave)) {
        psi = advance(std::move(psi), h, now, t, cfg.dt);
        now = t;
        if (boundary_mass(psi) > wrap) {
            report.truncated = true;
            report.note = wrap_note(t, wrap);
            break;
        }
        report.norm_drift = std::max(report.norm_drift,
                                     std::abs(norm(psi) - 1.0));

        DyadicSample s;
        s.t = t;
        const Field fa_psi = apply_cone(psi, fa, t);
        s.direct = norm(fa_psi) * norm(fa_psi);

        const Field phi_minus = root(psi, -0.5);
        const Field phi_plus = root(psi, 0.5);
        const Field fa2_phi_minus = apply_cone(phi_minus, fa, t, 2);

        Field accounted(grid, Representation::position);
        for (int n = 0; n <= cfg.n_max; ++n) {
            const Field en = in_representation(wins[n](phi_plus),
                                               Representation::position);
            const Field fn = shell_step_of_A(boundary_taper(en), cfg.R, m,
                                             n, t, qopts);
            const double term_out =
                std::real(inner_product(fa2_phi_minus, fn));
            const double term_in =
                std::real(inner_product(fa2_phi_minus, minus(en, fn)));
            s.fn_terms.push_back(term_out);
            s.fbar_terms.push_back(term_in);
            s.fn_sum += term_out;
            s.fbar_sum += term_in;
            accounted.values += en.values;
        }
        s.rest = std::real(inner_product(fa2_phi_minus,
                                         minus(phi_plus, accounted)));

        const Field fa2_psi = apply_cone(psi, fa, t, 2);
        s.q = inner_product(phi_minus, root(fa2_psi, 0.5)) -
              inner_product(fa2_phi_minus, phi_plus);

        s.closure =
            std::abs(s.direct - (s.fn_sum + s.fbar_sum + s.q.real())) /
            std::max(s.direct, 1e-12);
        report.samples.push_back(std::move(s));
    }
    return report;
}

}  // namespace photonlab
