#pragma once

#include "photonlab/calculus.hpp"
#include "photonlab/grid.hpp"
#include "photonlab/operators.hpp"
#include "photonlab/smooth_step.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace photonlab {

/// Envelope family of the initial profile. `gaussian` is the default
/// localized packet. `power_law` uses (1 + (r/width)^2)^(-tail_power/2),
/// whose |x|^(-tail_power) amplitude tails keep feeding the moving cone
/// transition; with tail_power = 1/2 the squared mass crossing the
/// transition per octave of time is scale-invariant, which makes the
/// commutator term of the dyadic assembly decay like 1/t instead of
/// dropping off the cone super-polynomially.
enum class StateProfile { gaussian, power_law };

/// Localized, energy-filtered initial state: a modulated envelope
/// pushed through a smoothed spectral window for [energy_lo, energy_hi].
/// The window's C^4 edges put percent-level squared mass into x^-5
/// position tails; runs whose observables live in the far cone (the
/// free-speed baselines) can disable the window, since a momentum-narrow
/// Gaussian is already energy-localized with exponential accuracy.
struct InitialStateSpec {
    StateProfile profile = StateProfile::gaussian;
    double tail_power = 0.5;  // amplitude decay exponent of power_law
    bool energy_filter = true;
    double energy_lo = 0.25;
    double energy_hi = 0.5;
    double filter_theta = 0.1;  // relative edge width of the energy window
    double center = 0.0;        // along the first axis
    double width = 4.0;
    double wavevector = 0.375;  // modulation along the first axis
};

/// Parameters of the cone/shell observables. The position-cone threshold
/// a and the scaled-generator threshold R must satisfy 1 < R < a; the
/// shared transition fraction margin() then keeps the outgoing shell
/// cutoff (support b <= R(1+m)) disjoint from the cone step (support
/// b >= a(1-m)) by construction.
struct RunConfig {
    double R = 2.0;
    double a = 3.0;
    double eps = 0.5;  // weight exponent of <x>^{1+eps}
    int n_max = 4;
    double t_start = 1.0;
    double T = 16.0;
    double dt = 0.05;
    int samples_per_octave = 2;
    double theta = 0.25;           // dyadic window smoothing fraction
    double quad_tolerance = 1e-5;  // group-quadrature tail target
    InitialStateSpec state;
    std::uint64_t seed = 1;

    /// Shared transition fraction of the cone and shell steps.
    double margin() const;
    /// Throws std::invalid_argument aggregating every violated constraint.
    void validate() const;
};

/// Step profile of the cone indicator F(|x|/t > a) (center a, width
/// margin()*a, rising).
SmoothStep cone_profile(const RunConfig& cfg);

/// Multiplies f by F(|x|/t)^power in the position representation.
Field apply_cone(const Field& f, const SmoothStep& s, double t,
                 int power = 1);

/// F(A/t > R 2^-n) f, evaluated canonically as a unit step at scale
/// R t 2^-n, so that (2R, t) and (R, 2t) produce identical results.
Field shell_step_of_A(const Field& f, double big_r, double margin, int n,
                      double t, const GroupQuadratureOptions& opts = {});

/// The derivative (bump) profile of the same step at the same scale.
Field shell_bump_of_A(const Field& f, double big_r, double margin, int n,
                      double t, const GroupQuadratureOptions& opts = {});

/// Log-spaced sample times t_start * 2^(j / per_octave), ending at T.
std::vector<double> log_time_mesh(double t_start, double big_t,
                                  int per_octave);

struct PreparedState {
    Field psi;
    double energy_mean = 0.0;
    double weighted_norm_x = 0.0;  // || <x>^{1+eps} psi ||
    double filtered_mass = 0.0;    // squared-mass fraction surviving the filter
};

/// psi_0 = normalized P_c E~_I(H) (localized profile). Throws when the
/// energy filter leaves less than 1e-6 of the squared mass.
PreparedState prepare_initial_state(const RunConfig& cfg,
                                    const HamiltonianSpec& h);

/// Observables on a log-spaced time mesh. Which columns are populated
/// depends on the producing run; cumulative columns are non-decreasing.
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> tail_norm;  // || F_a(|x|/t > a) psi(t) ||
    /// Per-sample, per-shell norms || F_a E_n psi ||.
    std::vector<std::vector<double>> shells;
    /// The same split by the generator cutoff: F_a F_n(A/t) E_n psi and
    /// F_a (1 - F_n(A/t)) E_n psi.
    std::vector<std::vector<double>> shells_out;
    std::vector<std::vector<double>> shells_in;
    std::vector<double> integrand;   // squared-norm integrand samples
    std::vector<double> cumulative;  // trapezoid in log t (dt/t measure)
    std::vector<double> q;           // commutator term of the assembly
    double normalizer = 1.0;
    double split_time = 0.0;           // 2^n / R when inside [t_start, T]
    double cumulative_at_split = 0.0;  // integral over [t_start, split]
    double norm_drift = 0.0;           // max | ||psi(t)|| - 1 |
    bool truncated = false;            // wrap-around cut the series short
    std::string note;
};

/// Tail norm along the evolution plus the per-shell decomposition.
/// Stops early (truncated flag) when the boundary mass exceeds 1e-4.
TimeSeries run_maxvel(const RunConfig& cfg, const HamiltonianSpec& h);

enum class PropagationVariant { f_prime, f, bump };

/// Cumulative integral of || G(A/t) E_n psi(t) ||^2 dt/t with G the step
/// (variant f) or its bump derivative (f_prime, bump), normalized by
/// || E_n psi_0 ||^2, except variant f which uses <E_n psi_0, <A> E_n psi_0>.
/// The bump variant also reports the integral split at t = 2^n / R.
TimeSeries run_propagation_estimate(const RunConfig& cfg,
                                    const HamiltonianSpec& h, int n,
                                    PropagationVariant variant);

struct DyadicSample {
    double t = 0.0;
    double direct = 0.0;  // <psi, F_a^2 psi>
    std::vector<double> fn_terms;    // Re <H^-1/2 psi, F_a^2 F_n E_n^2 H^1/2 psi>
    std::vector<double> fbar_terms;  // the complementary (1 - F_n) parts
    double fn_sum = 0.0;
    double fbar_sum = 0.0;
    double rest = 0.0;  // shells beyond n_max (truncation estimate)
    /// <H^-1/2 psi, [H^1/2, F_a^2] psi>. The real part enters the closure
    /// identity; the modulus carries the 1/t decay (its leading term is
    /// imaginary, the real part is one order smaller).
    Complex q = 0.0;
    double closure = 0.0;  // |direct - (fn+fbar+Re q)| / max(direct, 1e-12)
};

struct DyadicReport {
    std::vector<DyadicSample> samples;
    double neglected_mass = 0.0;  // 1 - sum_n ||E_n psi_0||^2
    double norm_drift = 0.0;
    bool truncated = false;
    std::string note;
};

/// Splits <psi, F_a^2 psi> into per-shell generator-localized pieces plus
/// the commutator term q, using squared dyadic windows (which sum to the
/// identity) and the square-root calculus of H restricted to its positive
/// spectrum. On one-dimensional grids the square roots come from a dense
/// eigendecomposition (valid with bound states present); otherwise the
/// resolvent quadrature is used and bound states are rejected.
DyadicReport run_dyadic_assembly(const RunConfig& cfg,
                                 const HamiltonianSpec& h);

}  // namespace photonlab
