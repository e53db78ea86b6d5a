#pragma once

#include "photonlab/grid.hpp"
#include "photonlab/operators.hpp"

#include <Eigen/Dense>

namespace photonlab {

/// 3D radial reduction on the reduced wavefunction u(r) = r psi(r).
///
/// Nodes r_j = j h, j = 1..n, h = rmax/(n+1), with a sine basis
/// sin(k_m r), k_m = pi m / rmax (Dirichlet at 0 and rmax). On u the
/// radial Laplacian is -u'' and the dilation generator reduces to the
/// 1D form -i (r d/dr + 1/2). Dense transforms keep every operator
/// available as an explicit matrix for oracle use.
class RadialGrid {
public:
    RadialGrid(int n, double rmax);

    int n() const { return n_; }
    double rmax() const { return rmax_; }
    double spacing() const { return h_; }
    const RVector& r() const { return r_; }
    const RVector& k() const { return k_; }

    /// Unitary involutive sine transform (DST-I, normalized).
    const Eigen::MatrixXd& sine() const { return sine_; }
    /// d/dr on the sine interpolant.
    const Eigen::MatrixXd& derivative() const { return deriv_; }

private:
    int n_;
    double rmax_;
    double h_;
    RVector r_;
    RVector k_;
    Eigen::MatrixXd sine_;
    Eigen::MatrixXd deriv_;
};

/// h-weighted inner product / norm for reduced radial functions
/// (equals the 3D inner product of the radial fields up to 4 pi).
Complex radial_inner_product(const RadialGrid& g, const CVector& u,
                             const CVector& v);
double radial_norm(const RadialGrid& g, const CVector& u);

/// |p|^alpha on the reduced function (sine-diagonal multiplier k^alpha).
CVector apply_p_alpha_radial(const RadialGrid& g, const CVector& u,
                             double alpha);

/// Multiplication by r^alpha (nodes exclude r = 0, so negative powers
/// are well defined).
CVector apply_r_power_radial(const RadialGrid& g, const CVector& u,
                             double alpha);

/// Dilation generator on u: A u = -i (r u' + u/2).
CVector apply_A_radial(const RadialGrid& g, const CVector& u);

/// H u = |p| u + V(r) u.
CVector apply_H_radial(const RadialGrid& g, const CVector& u,
                       const PotentialSpec& v);

/// Dense Hermitian matrices for oracle work.
Eigen::MatrixXd p_alpha_matrix(const RadialGrid& g, double alpha);
Eigen::MatrixXd hamiltonian_matrix(const RadialGrid& g,
                                   const PotentialSpec& v);
Eigen::MatrixXcd a_matrix(const RadialGrid& g);

}  // namespace photonlab
