#pragma once

#include "photonlab/grid.hpp"

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace photonlab::detail {

using ApplyFn = std::function<CVector(const CVector&)>;

struct LanczosRun {
    Eigen::VectorXd alpha;          // diagonal
    Eigen::VectorXd beta;           // off-diagonal (beta[i] couples i, i+1)
    std::vector<CVector> basis;     // kept only when reorthogonalizing
    int steps = 0;
};

/// Hermitian Lanczos with optional full reorthogonalization. The weight
/// is the plain l2 inner product (the h^dim factor cancels in all Ritz
/// quantities).
LanczosRun lanczos(const ApplyFn& apply, const CVector& start, int max_steps,
                   bool reorthogonalize,
                   const std::vector<CVector>* deflate = nullptr);

/// Eigenvalues of the tridiagonal Lanczos matrix.
Eigen::VectorXd ritz_values(const LanczosRun& run);

/// Extremal Ritz values (min, max).
std::pair<double, double> extremal_ritz(const ApplyFn& apply,
                                        const CVector& start, int max_steps);

/// <g, func(B) g> by Lanczos quadrature on the Hermitian operator B.
double lanczos_quadratic_form(const ApplyFn& apply, const CVector& g,
                              const std::function<double(double)>& func,
                              int max_steps = 60);

struct EigenPair {
    double value;
    CVector vector;
    double residual;
};

/// Lowest eigenpairs by restarted, deflated Lanczos.
std::vector<EigenPair> lowest_eigenpairs(const ApplyFn& apply,
                                         const CVector& start, int count,
                                         double tol, int cycle_steps = 80,
                                         int max_cycles = 60);

/// Preconditioned conjugate gradient for Hermitian positive definite
/// operators. Returns the iterate; throws on non-convergence.
CVector pcg(const ApplyFn& apply, const ApplyFn& precond, const CVector& rhs,
            double tol, int max_iter);

}  // namespace photonlab::detail
