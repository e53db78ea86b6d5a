#include "photonlab/detail/lanczos.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace photonlab::detail {

namespace {

Eigen::MatrixXd tridiagonal(const LanczosRun& run) {
    const int m = run.steps;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        t(i, i) = run.alpha[i];
        if (i + 1 < m) {
            t(i, i + 1) = run.beta[i];
            t(i + 1, i) = run.beta[i];
        }
    }
    return t;
}

void orthogonalize_against(CVector& v, const std::vector<CVector>& basis) {
    for (const CVector& b : basis) v -= b.dot(v) * b;
}

}  // namespace

LanczosRun lanczos(const ApplyFn& apply, const CVector& start, int max_steps,
                   bool reorthogonalize, const std::vector<CVector>* deflate) {
    LanczosRun run;
    run.alpha.resize(max_steps);
    run.beta.resize(max_steps);

    CVector v = start;
    if (deflate) orthogonalize_against(v, *deflate);
    const double nv = v.norm();
    if (!(nv > 0)) throw std::invalid_argument("lanczos: zero start vector");
    v /= nv;

    CVector v_prev = CVector::Zero(v.size());
    double beta_prev = 0.0;
    for (int j = 0; j < max_steps; ++j) {
        run.basis.push_back(v);
        CVector w = apply(v);
        const double a = std::real(v.dot(w));
        run.alpha[j] = a;
        w -= a * v + beta_prev * v_prev;
        if (deflate) orthogonalize_against(w, *deflate);
        if (reorthogonalize) {
            orthogonalize_against(w, run.basis);
            orthogonalize_against(w, run.basis);  // second pass
        }
        const double b = w.norm();
        run.steps = j + 1;
        if (b < 1e-13) break;
        run.beta[j] = b;
        v_prev = v;
        v = w / b;
        beta_prev = b;
    }
    if (!reorthogonalize) run.basis.clear();
    return run;
}

Eigen::VectorXd ritz_values(const LanczosRun& run) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiagonal(run),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

std::pair<double, double> extremal_ritz(const ApplyFn& apply,
                                        const CVector& start, int max_steps) {
    const LanczosRun run = lanczos(apply, start, max_steps, false);
    const Eigen::VectorXd vals = ritz_values(run);
    return {vals.minCoeff(), vals.maxCoeff()};
}

double lanczos_quadratic_form(const ApplyFn& apply, const CVector& g,
                              const std::function<double(double)>& func,
                              int max_steps) {
    const double ng = g.norm();
    if (!(ng > 0)) return 0.0;
    const LanczosRun run = lanczos(apply, g, max_steps, true);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiagonal(run));
    const Eigen::VectorXd& vals = es.eigenvalues();
    const Eigen::VectorXd w = es.eigenvectors().row(0);
    double acc = 0.0;
    for (int i = 0; i < vals.size(); ++i) acc += w[i] * w[i] * func(vals[i]);
    return acc * ng * ng;
}

std::vector<EigenPair> lowest_eigenpairs(const ApplyFn& apply,
                                         const CVector& start, int count,
                                         double tol, int cycle_steps,
                                         int max_cycles) {
    std::vector<EigenPair> converged;
    std::vector<CVector> deflate;
    CVector v0 = start;
    for (int target = 0; target < count; ++target) {
        bool done = false;
        for (int cycle = 0; cycle < max_cycles && !done; ++cycle) {
            const LanczosRun run =
                lanczos(apply, v0, cycle_steps, true, &deflate);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                tridiagonal(run));
            const int lo = 0;  // smallest Ritz value
            const double theta = es.eigenvalues()[lo];
            CVector y = CVector::Zero(start.size());
            for (int i = 0; i < run.steps; ++i)
                y += es.eigenvectors()(i, lo) * run.basis[i];
            y.normalize();
            CVector r = apply(y) - theta * y;
            orthogonalize_against(r, deflate);
            const double res = r.norm();
            v0 = y;
            if (res < tol) {
                converged.push_back({theta, y, res});
                deflate.push_back(y);
                done = true;
            }
        }
        if (!done)
            throw std::runtime_error(
                "lowest_eigenpairs: Lanczos failed to converge");
        // Restart the next search from a perturbed vector.
        v0 = start;
        orthogonalize_against(v0, deflate);
        if (v0.norm() < 1e-8) break;
    }
    return converged;
}

CVector pcg(const ApplyFn& apply, const ApplyFn& precond, const CVector& rhs,
            double tol, int max_iter) {
    CVector x = CVector::Zero(rhs.size());
    CVector r = rhs;
    CVector z = precond ? precond(r) : r;
    CVector p = z;
    Complex rz = r.dot(z);
    const double rhs_norm = rhs.norm();
    if (!(rhs_norm > 0)) return x;
    for (int it = 0; it < max_iter; ++it) {
        const CVector ap = apply(p);
        const Complex alpha = rz / p.dot(ap);
        x += alpha * p;
        r -= alpha * ap;
        if (r.norm() < tol * rhs_norm) return x;
        z = precond ? precond(r) : r;
        const Complex rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    throw std::runtime_error("pcg: no convergence within iteration budget");
}

}  // namespace photonlab::detail
