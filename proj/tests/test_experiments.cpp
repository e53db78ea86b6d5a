#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "photonlab/experiments.hpp"
#include "photonlab/operators.hpp"

#include <cmath>
#include <complex>

using namespace photonlab;

namespace {

HamiltonianSpec free_line(int n, double half_length) {
    return make_hamiltonian(make_grid(1, n, half_length),
                            gaussian_well(0.0, 1.0));
}

double doubling_ratio(const DyadicReport& rep, std::size_t i) {
    return std::abs(rep.samples[i].q) / std::abs(rep.samples[i + 1].q);
}

}  // namespace

TEST_CASE("run configuration margin and validation") {
    RunConfig cfg;
    cfg.R = 2.0;
    cfg.a = 3.0;
    CHECK(cfg.margin() == doctest::Approx(0.1));
    cfg.validate();

    cfg.a = 100.0;  // margin capped
    CHECK(cfg.margin() == doctest::Approx(0.3));
    cfg.validate();

    cfg.a = 1.0;
    CHECK_THROWS_WITH_AS(cfg.validate(),
                         doctest::Contains("1 < R < a"),
                         std::invalid_argument);

    cfg.R = 0.5;
    cfg.dt = -1.0;
    // Violations are aggregated into one message.
    CHECK_THROWS_WITH_AS(cfg.validate(),
                         doctest::Contains("R must exceed 1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(cfg.validate(),
                         doctest::Contains("dt must be positive"),
                         std::invalid_argument);

    RunConfig tails;
    tails.state.profile = StateProfile::power_law;
    tails.state.tail_power = -1.0;
    CHECK_THROWS_WITH_AS(tails.validate(),
                         doctest::Contains("tail_power"),
                         std::invalid_argument);
}

TEST_CASE("log-spaced time mesh") {
    const std::vector<double> mesh = log_time_mesh(1.0, 16.0, 1);
    REQUIRE(mesh.size() == 5);
    CHECK(mesh[0] == doctest::Approx(1.0));
    CHECK(mesh[2] == doctest::Approx(4.0));
    CHECK(mesh[4] == doctest::Approx(16.0));

    const std::vector<double> ragged = log_time_mesh(1.0, 10.0, 1);
    CHECK(ragged.back() == doctest::Approx(10.0));
    for (std::size_t i = 1; i < ragged.size(); ++i)
        CHECK(ragged[i] > ragged[i - 1]);

    CHECK_THROWS_AS(log_time_mesh(0.0, 4.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(log_time_mesh(2.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("cone profile and evaluator-level scaling invariance") {
    RunConfig cfg;
    cfg.R = 2.0;
    cfg.a = 3.0;
    const SmoothStep fa = cone_profile(cfg);
    const double m = cfg.margin();
    CHECK(fa(cfg.a * (1.0 - m) - 1e-9) == 0.0);
    CHECK(fa(cfg.a * (1.0 + m) + 1e-9) == 1.0);

    // F_n(A / (R t 2^-n)) depends on R and t only through their product,
    // and the evaluator realizes that identity bitwise.
    const HamiltonianSpec h = free_line(128, 32.0);
    double center[3] = {2.0, 0.0, 0.0};
    double k0[3] = {0.5, 0.0, 0.0};
    const Field f = normalized(gaussian_packet(h.grid, center, 2.0, k0));
    GroupQuadratureOptions opts;
    opts.tolerance = 1e-5;
    const Field doubled_r = shell_step_of_A(f, 3.0, 0.1, 1, 2.0, opts);
    const Field doubled_t = shell_step_of_A(f, 1.5, 0.1, 1, 4.0, opts);
    CHECK((doubled_r.values - doubled_t.values).norm() == 0.0);
}

TEST_CASE("initial state preparation") {
    const HamiltonianSpec h = free_line(256, 64.0);
    RunConfig cfg;
    const PreparedState p = prepare_initial_state(cfg, h);
    CHECK(norm(p.psi) == doctest::Approx(1.0).epsilon(1e-10));
    // The mean energy settles inside the filter interval.
    CHECK(p.energy_mean > cfg.state.energy_lo);
    CHECK(p.energy_mean < cfg.state.energy_hi);
    CHECK(p.filtered_mass > 0.3);
    CHECK(p.filtered_mass < 1.0);
    CHECK(p.weighted_norm_x > 0.0);

    RunConfig off = cfg;
    off.state.energy_filter = false;
    const PreparedState q = prepare_initial_state(off, h);
    CHECK(q.filtered_mass == 1.0);
    CHECK(q.energy_mean ==
          doctest::Approx(cfg.state.wavevector).epsilon(0.15));

    RunConfig heavy = cfg;
    heavy.state.profile = StateProfile::power_law;
    heavy.state.width = 2.0;
    heavy.state.energy_filter = false;
    const PreparedState r = prepare_initial_state(heavy, h);
    CHECK(norm(r.psi) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(boundary_mass(r.psi) > 0.0);

    RunConfig dead = cfg;
    dead.state.energy_lo = 50.0;  // far above the spectrum
    dead.state.energy_hi = 60.0;
    CHECK_THROWS_WITH_AS(prepare_initial_state(dead, h),
                         doctest::Contains("annihilates"),
                         std::runtime_error);
}

TEST_CASE("maximal velocity, free baseline") {
    const HamiltonianSpec h = free_line(512, 128.0);
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

    const TimeSeries ts = run_maxvel(cfg, h);
    REQUIRE(!ts.truncated);
    REQUIRE(ts.times.size() == 5);
    CHECK(ts.norm_drift < 1e-8);

    // Nothing escapes the light cone: the tail norm at t = 40 is small
    // and keeps falling (below half its t = 10 value).
    CHECK(ts.tail_norm.back() < 0.05);
    CHECK(ts.tail_norm.back() < 0.5 * ts.tail_norm[2]);
    // Strictly decreasing across T/4, T/2, T.
    CHECK(ts.tail_norm[2] > ts.tail_norm[3]);
    CHECK(ts.tail_norm[3] > ts.tail_norm[4]);

    // Triangle inequality on the generator split of every shell, exact
    // because the complement is formed by subtraction.
    for (std::size_t i = 0; i < ts.times.size(); ++i)
        for (int n = 0; n <= cfg.n_max; ++n)
            CHECK(ts.shells[i][n] <=
                  ts.shells_out[i][n] + ts.shells_in[i][n] + 1e-10);
}

TEST_CASE("maximal velocity, packet starting outside the cone") {
    const HamiltonianSpec h = free_line(256, 64.0);
    RunConfig cfg;
    cfg.R = 1.15;
    cfg.a = 1.3;
    cfg.n_max = 0;
    cfg.state.energy_filter = false;
    cfg.state.center = -30.0;
    cfg.state.width = 4.0;
    // Keep the momentum content well away from the k = 0 kink of |k|,
    // whose diffraction halo would otherwise reach the boundary monitor.
    cfg.state.wavevector = 0.75;
    cfg.t_start = 2.0;
    cfg.T = 20.0;
    cfg.dt = 0.06;
    cfg.samples_per_octave = 1;

    const TimeSeries ts = run_maxvel(cfg, h);
    REQUIRE(!ts.truncated);
    // |x|/t starts far above a, so the whole mass sits in the tail; by
    // T the inward-moving packet has re-entered the cone.
    CHECK(ts.tail_norm.front() > 0.9);
    CHECK(ts.tail_norm.back() < 0.2);
}

TEST_CASE("maximal velocity tail norm is monotone in a") {
    const HamiltonianSpec h = free_line(256, 64.0);
    RunConfig cfg;
    cfg.R = 1.15;
    cfg.a = 1.3;
    cfg.n_max = 0;
    cfg.state.energy_filter = false;
    cfg.state.center = -6.0;
    cfg.state.width = 4.0;
    cfg.t_start = 2.0;
    cfg.T = 10.0;
    cfg.dt = 0.06;
    cfg.samples_per_octave = 1;
    const TimeSeries narrow = run_maxvel(cfg, h);

    RunConfig wide = cfg;
    wide.a = 1.7;
    const TimeSeries wider = run_maxvel(wide, h);

    REQUIRE(narrow.times.size() == wider.times.size());
    for (std::size_t i = 0; i < narrow.times.size(); ++i)
        CHECK(wider.tail_norm[i] <= narrow.tail_norm[i] + 1e-12);
}

TEST_CASE("maximal velocity with a binding well") {
    const HamiltonianSpec h =
        make_hamiltonian(make_grid(1, 512, 128.0), gaussian_well(0.4, 2.0));
    CHECK(!h.bound_states.empty());

    RunConfig cfg;
    cfg.R = 1.3;
    cfg.a = 1.5;
    cfg.n_max = 2;
    cfg.state.energy_filter = false;
    cfg.state.center = -10.0;
    cfg.state.width = 6.0;
    cfg.t_start = 4.0;
    cfg.T = 32.0;
    cfg.dt = 0.06;
    cfg.samples_per_octave = 1;

    const TimeSeries ts = run_maxvel(cfg, h);
    REQUIRE(!ts.truncated);
    REQUIRE(ts.times.size() == 4);
    CHECK(ts.norm_drift < 1e-8);
    // Decreasing tail with at least 25% lost between T/2 and T, ending
    // below the 0.05 plateau level.
    CHECK(ts.tail_norm[2] > ts.tail_norm[3]);
    CHECK(ts.tail_norm[3] < 0.75 * ts.tail_norm[2]);
    CHECK(ts.tail_norm[3] < 0.05);
}

TEST_CASE("propagation estimate, three variants") {
    const HamiltonianSpec h = free_line(512, 128.0);
    RunConfig cfg;
    cfg.R = 5.0;
    cfg.a = 7.0;
    cfg.n_max = 2;
    cfg.t_start = 1.0;
    cfg.T = 32.0;
    cfg.dt = 0.06;
    cfg.samples_per_octave = 2;
    cfg.state.energy_lo = 0.55;
    cfg.state.energy_hi = 0.95;
    cfg.state.filter_theta = 0.2;
    cfg.state.wavevector = 0.75;

    const TimeSeries fp =
        run_propagation_estimate(cfg, h, 0, PropagationVariant::f_prime);
    REQUIRE(!fp.truncated);
    REQUIRE(fp.times.size() == 11);
    CHECK(fp.normalizer == doctest::Approx(1.0).epsilon(0.05));
    // Cumulative integral: non-decreasing and bounded by the shell mass
    // times an O(1) constant.
    for (std::size_t i = 1; i < fp.cumulative.size(); ++i)
        CHECK(fp.cumulative[i] >= fp.cumulative[i - 1]);
    CHECK(fp.cumulative.back() < fp.normalizer);
    // Cauchy increments over the final two time doublings shrink by at
    // least 2x each (the earlier pairs still see the transient).
    const double i8 = fp.cumulative[6] - fp.cumulative[4];
    const double i16 = fp.cumulative[8] - fp.cumulative[6];
    const double i32 = fp.cumulative[10] - fp.cumulative[8];
    CHECK(i8 >= 2.0 * i16);
    CHECK(i16 >= 2.0 * i32);

    const TimeSeries fv =
        run_propagation_estimate(cfg, h, 0, PropagationVariant::f);
    REQUIRE(!fv.truncated);
    // <A>-weighted normalizer exceeds the plain mass and the step-squared
    // integrand decays fast once the shell leaves the cutoff region.
    CHECK(fv.normalizer > 1.0);
    CHECK(fv.cumulative.back() < 0.1 * fv.normalizer);
    CHECK(fv.integrand.back() < 1e-4 * fv.integrand.front());

    const TimeSeries bump =
        run_propagation_estimate(cfg, h, 0, PropagationVariant::bump);
    // For n = 0, R = 5 the split point 2^n / R sits before t_start.
    CHECK(bump.split_time == 0.0);
    CHECK(bump.note.find("split time") != std::string::npos);
    REQUIRE(bump.integrand.size() == fp.integrand.size());
    for (std::size_t i = 0; i < bump.integrand.size(); ++i)
        CHECK(bump.integrand[i] ==
              doctest::Approx(fp.integrand[i]).epsilon(1e-12));

    CHECK_THROWS_AS(
        run_propagation_estimate(cfg, h, 7, PropagationVariant::f_prime),
        std::invalid_argument);
}

TEST_CASE("propagation estimate reports the time-split integral") {
    const HamiltonianSpec h = free_line(256, 64.0);
    RunConfig cfg;
    cfg.R = 1.2;
    cfg.a = 1.6;
    cfg.n_max = 2;
    cfg.t_start = 1.0;
    cfg.T = 4.0;
    cfg.dt = 0.06;
    cfg.samples_per_octave = 2;

    const TimeSeries ts =
        run_propagation_estimate(cfg, h, 1, PropagationVariant::bump);
    CHECK(ts.split_time == doctest::Approx(2.0 / 1.2));
    CHECK(ts.note.empty());
    CHECK(ts.cumulative_at_split > 0.0);
    CHECK(ts.cumulative_at_split < ts.cumulative.back());
}

TEST_CASE("dyadic assembly closes and its commutator term decays like 1/t") {
    const HamiltonianSpec h = free_line(512, 128.0);
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
    REQUIRE(!rep.truncated);
    REQUIRE(rep.samples.size() == 5);
    CHECK(rep.neglected_mass < 0.01);
    CHECK(rep.norm_drift < 1e-8);
    for (const DyadicSample& s : rep.samples) {
        CHECK(s.closure < 0.01);
        CHECK(std::abs(s.rest) < 0.01);
    }
    // The x^{-1/2} envelope feeds the cone transition scale-invariantly,
    // so |Q| halves per doubling once the core has crossed (the last two
    // sample pairs).
    CHECK(doubling_ratio(rep, 2) > 1.7);
    CHECK(doubling_ratio(rep, 2) < 2.3);
    CHECK(doubling_ratio(rep, 3) > 1.7);
    CHECK(doubling_ratio(rep, 3) < 2.3);
}

TEST_CASE("dyadic assembly reduces to one term for a single-shell state") {
    const HamiltonianSpec h = free_line(256, 64.0);
    RunConfig cfg;
    cfg.R = 1.05;
    cfg.a = 1.5;
    cfg.n_max = 2;
    cfg.state.width = 8.0;
    cfg.state.wavevector = 0.345;
    cfg.state.energy_lo = 0.33;  // strictly inside shell 1's flat region
    cfg.state.energy_hi = 0.36;
    cfg.state.filter_theta = 0.04;
    cfg.t_start = 2.0;
    cfg.T = 4.0;
    cfg.dt = 0.06;
    cfg.samples_per_octave = 1;

    const DyadicReport rep = run_dyadic_assembly(cfg, h);
    REQUIRE(!rep.truncated);
    CHECK(std::abs(rep.neglected_mass) < 1e-8);
    for (const DyadicSample& s : rep.samples) {
        CHECK(s.closure < 1e-8);
        CHECK(std::abs(s.fn_terms[1]) + std::abs(s.fbar_terms[1]) > 0.5);
        for (int n : {0, 2}) {
            CHECK(std::abs(s.fn_terms[n]) < 1e-4);
            CHECK(std::abs(s.fbar_terms[n]) < 1e-4);
        }
    }
}

TEST_CASE("dyadic assembly through the resolvent calculus in 2d") {
    const HamiltonianSpec h =
        make_hamiltonian(make_grid(2, 64, 16.0), gaussian_well(0.0, 1.0));
    RunConfig cfg;
    cfg.R = 1.05;
    cfg.a = 1.5;
    cfg.n_max = 1;
    cfg.state.energy_filter = false;
    cfg.state.width = 4.0;
    cfg.state.wavevector = 1.0;
    cfg.t_start = 1.0;
    cfg.T = 2.0;
    cfg.dt = 0.04;
    cfg.samples_per_octave = 1;

    const DyadicReport rep = run_dyadic_assembly(cfg, h);
    REQUIRE(!rep.truncated);
    REQUIRE(rep.samples.size() == 2);
    // The small box covers only part of the spectrum with shells, so the
    // remainder term is large; the full identity including it must still
    // close to the accuracy of the resolvent quadrature.
    for (const DyadicSample& s : rep.samples) {
        const double full =
            s.fn_sum + s.fbar_sum + s.rest + s.q.real();
        CHECK(std::abs(s.direct - full) < 1e-4);
        CHECK(std::abs(s.q) > 0.0);
    }
}

TEST_CASE("time step guard") {
    const HamiltonianSpec h = free_line(256, 64.0);
    RunConfig cfg;
    cfg.dt = 1.0;  // dt * lambda_max well above 1/2
    CHECK_THROWS_WITH_AS(run_maxvel(cfg, h),
                         doctest::Contains("time step too large"),
                         std::invalid_argument);
}
