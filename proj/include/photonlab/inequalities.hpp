#pragma once

#include "photonlab/grid.hpp"
#include "photonlab/operators.hpp"
#include "photonlab/radial.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace photonlab {

/// Outcome of one operator-inequality check, always evaluated at a base
/// resolution and at a 2x refinement:
///  - holds: the bound is met with >= 5% margin at both resolutions and
///    the two values agree within the stability budget;
///  - holds_marginally: the bound is met but the margin or the
///    refinement stability is not;
///  - violated: the bound fails at either resolution;
///  - inapplicable: a hypothesis of the check fails for the input.
enum class Verdict { holds, holds_marginally, violated, inapplicable };

std::string to_string(Verdict v);

struct InequalityReport {
    std::string name;
    std::string hypothesis;                   // parameters, human readable
    std::map<std::string, double> constants;  // estimated constants
    double coarse_value = 0.0;  // defining ratio at base resolution
    double fine_value = 0.0;    // defining ratio at 2x refinement
    double bound = 0.0;         // the bound the ratio is tested against
    Verdict verdict = Verdict::inapplicable;
    std::string detail;
};

struct InequalityOptions {
    /// Base radial resolution for dense-matrix checks (doubled for the
    /// refinement pass).
    int radial_points = 256;
    double rmax = 40.0;
    /// Resolution for dyadic-shell checks, which need a box large enough
    /// to resolve energies down to 2^-(n_max+1).
    int shell_points = 1024;
    double shell_rmax = 400.0;
    int trials = 32;
    double theta = 0.25;  // dyadic window smoothing fraction
    std::uint64_t seed = 20260824;
};

/// Upper-bound verdict: value must stay below `bound`. Stability is
/// measured against the larger of the two values and of `bound`, so
/// residual-style checks do not thrash on rounding noise.
Verdict classify_upper(double coarse, double fine, double bound);
/// Lower-bound verdict: value must stay above `bound` (margin relative
/// to `scale`, defaulting to the value itself).
Verdict classify_lower(double coarse, double fine, double bound,
                       double scale = 0.0);

/// Identity r^2(-Laplace) = A^2 + 2iA - 3/4 on radial 3D states, with
/// the generator A = -i(x . grad + 3/2). Non-radial inputs (angular
/// mass above 1e-8, measured over the octahedral symmetry orbit) give
/// verdict inapplicable. The refinement pass decimates the field onto
/// the half-resolution subgrid.
InequalityReport check_r2_laplacian_identity(const Field& f);

/// ||p^-1 r^-1 u|| <= 2.1 ||u|| on the radial half line: a Gaussian
/// (checked against the 1.2872 quadrature oracle), random smooth
/// states, and a state concentrated near the origin at grid scale.
InequalityReport check_hardy_bound(const InequalityOptions& opts = {});

/// c(n) = max over shell states g = E_n(H) f of
/// (|| |p| g || + ||V g||) / (2^-n ||g||), for n = 0..n_max; uniformity
/// of c across shells is part of the verdict. Requires the short-range
/// hypothesis |V| < 1/(2r) on the grid.
InequalityReport check_energy_shell_momentum(const PotentialSpec& v,
                                             int n_max,
                                             const InequalityOptions& opts = {});

enum class Domination { H_over_p, p_over_H };

/// Best constant in H >= m|p| (or |p| >= delta H) as the smallest
/// eigenvalue of the operator pencil, optionally restricted to the
/// subspace orthogonal to discrete eigenstates.
InequalityReport estimate_domination(const PotentialSpec& v, Domination dir,
                                     bool project_bound_states,
                                     const InequalityOptions& opts = {});

/// Leakage || E_n(|p|) e^{i lambda A} E_n(|p|) f || / ||f|| for the
/// dilations in `lambdas` (lambda >= 0); the defining value is the
/// worst leakage among entries with lambda >= ln 2 + 2 theta_prime,
/// which must be < 1e-6.
InequalityReport check_support_separation(const std::vector<double>& lambdas,
                                          int shell, double theta_prime,
                                          const InequalityOptions& opts = {});

/// || E_nbar(|p|) E_n(H) || for nbar = n + 2, n = n_lo..n_hi, fitted to
/// C 2^-n; also reports the aggregate d-variant
/// || (1 - sum_{|m-n|<=1} E_m(|p|)) E_n(H) || against C n 2^-n.
InequalityReport check_cross_localization(const PotentialSpec& v, int n_lo,
                                          int n_hi,
                                          const InequalityOptions& opts = {});

/// || |p| H^-1 f || <= C ||f|| on continuous-subspace states, C stable
/// under refinement.
InequalityReport check_resolvent_momentum(const PotentialSpec& v,
                                          const InequalityOptions& opts = {});

/// Conjugation e^{i lambda A} r e^{-i lambda A} = e^lambda r on
/// in-range states, error < 1e-6 for lambda = +-ln 2.
InequalityReport check_weight_conjugation(const InequalityOptions& opts = {});

/// Runs every check against one potential and returns the reports
/// sorted by name.
std::vector<InequalityReport> run_inequality_suite(
    const PotentialSpec& v, const InequalityOptions& opts = {});

}  // namespace photonlab
