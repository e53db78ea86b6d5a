#pragma once

#include "photonlab/grid.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace photonlab {

enum class PotentialFamily { gaussian_well, polynomial_decay };
enum class PotentialVariant { V, x_grad_V, V_tilde };

/// Radial potential family. gaussian_well: V(r) = -g exp(-r^2/sigma^2);
/// polynomial_decay: V(r) = -g <r>^-q with q > 2.
struct PotentialSpec {
    PotentialFamily family = PotentialFamily::gaussian_well;
    double coupling = 0.0;  // g >= 0
    double sigma = 1.0;     // gaussian_well shape
    double q = 3.0;         // polynomial_decay exponent

    double value(double r) const;
    double radial_derivative_term(double r) const;  // r dV/dr = x.grad V
    double evaluate(double r, PotentialVariant variant) const;
};

PotentialSpec gaussian_well(double coupling, double sigma);
PotentialSpec polynomial_decay(double coupling, double q);

/// Checks that |V| and |x.grad V| fall off faster than r^-2 between the
/// half-radius and the boundary of the box. Throws on violation.
void validate_potential_decay(const PotentialSpec& v, const Grid& grid);

struct HamiltonianSpec {
    GridPtr grid;
    PotentialSpec potential;
    std::pair<double, double> spectral_bounds{0.0, 0.0};
    std::vector<std::pair<double, Field>> bound_states;
    double resonance_margin = 0.0;
};

/// Applies a bounded function of |p| (multiplication by symbol(|k|) in the
/// momentum representation). Symbols singular at k = 0 are admitted only
/// when the zero mode carries < 1e-6 of the squared mass; the zero mode is
/// then dropped.
Field apply_momentum_function(const Field& f,
                              const std::function<double(double)>& symbol);

Field apply_potential(const Field& f, const PotentialSpec& v,
                      PotentialVariant variant);

Field apply_H(const Field& f, const HamiltonianSpec& h);

/// Dilation generator A = -i/2 (x.grad + grad.x) by spectral
/// differentiation. Valid for fields with negligible boundary mass; the
/// fraction of squared mass within one cell of the box boundary is
/// reported through boundary_mass_out when non-null.
Field apply_A(const Field& f, double* boundary_mass_out = nullptr);

/// Squared-mass fraction on the outermost cell ring.
double boundary_mass(const Field& f);

/// Lanczos estimate of the extremal spectrum of H, padded by 5%.
std::pair<double, double> spectral_bounds(const HamiltonianSpec& h,
                                          double tol = 1e-8,
                                          int max_iter = 300);

Field project_continuous(const Field& f, const HamiltonianSpec& h);

struct HamiltonianOptions {
    bool compute_bound_states = true;
    double bound_state_tol = 1e-8;
    int lanczos_iter = 300;
};

/// Assembles a HamiltonianSpec: validates the potential decay, estimates
/// spectral bounds, and extracts any bound states (negative eigenvalues)
/// to the requested residual tolerance.
HamiltonianSpec make_hamiltonian(GridPtr grid, const PotentialSpec& v,
                                 const HamiltonianOptions& opts = {});

/// Smallest Ritz value of H on the continuous subspace, evaluated at the
/// native and the 2x-refined resolution. The proxy for the absence of
/// zero-energy thresholds: accepted when both margins are >= 0 and agree.
struct ResonanceProbe {
    double margin_coarse;
    double margin_fine;
    bool accepted;
};
ResonanceProbe probe_resonance(const GridPtr& grid, const PotentialSpec& v);

}  // namespace photonlab
