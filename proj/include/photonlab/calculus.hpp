#pragma once

#include "photonlab/grid.hpp"
#include "photonlab/operators.hpp"
#include "photonlab/smooth_step.hpp"

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace photonlab {

/// Smallest radius containing all but `mass_tol` of the squared mass
/// (position representation).
double support_radius(const Field& f, double mass_tol = 1e-10);

/// Same in momentum representation: smallest |k| radius containing all
/// but `mass_tol` of the squared mass.
double momentum_support_radius(const Field& f, double mass_tol = 1e-10);

/// Dilation group element: (e^{i lambda A} f)(x) = e^{dim*lambda/2}
/// f(e^lambda x), evaluated on the band-limited interpolant by a chirp-z
/// resampling per axis. Unitary on fields supported inside the box.
/// Throws when the rescaled support would exceed 0.9 L (lambda < 0) or
/// when the rescaled momentum support would exceed 0.9 of the Nyquist
/// frequency (lambda > 0), since neither result is representable.
/// `support_mass_tol` sets how much squared mass the support measurement
/// may ignore; tails below it are wrapped-masked away by the resampling.
Field apply_dilation(const Field& f, double lambda,
                     double support_mass_tol = 1e-10);

/// Trapezoid rule on [-Lambda, Lambda] for group integrals over the
/// dilation parameter. Midpoint nodes (symmetric, zero excluded) so that
/// principal-value weights are well defined.
struct GroupQuadrature {
    double truncation = 0.0;   // Lambda
    int nodes = 0;             // even
    double spacing = 0.0;
    double tolerance = 0.0;
    double support_mass_tol = 1e-10;
    bool truncated_by_box = false;  // box budget cut the Fourier tail

    double node(int j) const { return -truncation + (j + 0.5) * spacing; }
};

struct GroupQuadratureOptions {
    double tolerance = 1e-8;  // neglected |Fhat'| tail mass
    int node_budget = 20000;
    /// Extra hard cap on |lambda| (e.g. R t ln 2 when windows sandwich
    /// the integrand); infinity disables it.
    double hard_cap = std::numeric_limits<double>::infinity();
    /// Squared-mass fraction the support measurements may ignore. States
    /// with power-law position tails (e.g. spectrally filtered states)
    /// need a looser value; the ignored tails are then wrap-masked by
    /// each dilation, with per-node error up to its square root.
    double support_mass_tol = 1e-10;
};

/// Chooses truncation and node count for integrals of
/// Fhat'(lambda) e^{i lambda A / scale} against f: the tail criterion of
/// the SmoothStep, the box and Nyquist budgets of the dilations, and a
/// node spacing resolving the sampled A-spectrum of f.
GroupQuadrature plan_group_quadrature(const SmoothStep& step, double scale,
                                      const Field& f,
                                      const GroupQuadratureOptions& opts = {});

/// F(A/scale) f via the group representation
///   F(a) = (F(+inf)+F(-inf))/2 + (1/2pi) PV int Fhat'(l)/(i l) e^{i l a} dl.
Field function_of_A(const Field& f, const SmoothStep& step, double scale,
                    const GroupQuadratureOptions& opts = {});

/// F'(A/scale) f (derivative profile of the step; compactly supported).
Field derivative_of_A(const Field& f, const SmoothStep& step, double scale,
                      const GroupQuadratureOptions& opts = {});

/// Second-order remainder of the commutator expansion at scale
/// tau = R t 2^{-n}:
///   i[|p|^{1/2}, F(A/tau)] = (1/(2 tau)) F'(A/tau) |p|^{1/2} + R2.
/// Evaluated as a group integral with the exponentially growing factor
/// commuted onto whichever side keeps the integrand bounded.
Field commutator_remainder_R2(const Field& f, const SmoothStep& step,
                              double big_r, double t, int n,
                              const GroupQuadratureOptions& opts = {});

/// Time-dependent observable Phi(t) acting on fields.
struct Observable {
    std::string name;
    std::function<Field(const Field&, double)> apply;
    bool time_dependent = true;
};

/// Max over interior samples of
///   |d/dt <psi, Phi psi> - <psi, (i[H,Phi] + dPhi/dt) psi>|
/// relative to the scale of the observable, by centered differences.
/// Requires at least 3 uniformly spaced samples.
double heisenberg_check(const std::vector<std::pair<double, Field>>& traj,
                        const Observable& obs, const HamiltonianSpec& h);

}  // namespace photonlab
