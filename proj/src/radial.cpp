#include "photonlab/radial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace photonlab {

RadialGrid::RadialGrid(int n, double rmax) : n_(n), rmax_(rmax) {
    if (n < 4 || !(rmax > 0))
        throw std::invalid_argument("RadialGrid: need n >= 4, rmax > 0");
    h_ = rmax / (n + 1);
    r_.resize(n);
    k_.resize(n);
    for (int j = 0; j < n; ++j) {
        r_[j] = (j + 1) * h_;
        k_[j] = std::numbers::pi * (j + 1) / rmax;
    }
    const double scale = std::sqrt(2.0 / (n + 1));
    sine_.resize(n, n);
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m)
            sine_(j, m) = scale * std::sin(std::numbers::pi * (j + 1) *
                                           (m + 1) / (n + 1));
    // u'(r_j) = sum_m c_m k_m cos(k_m r_j), c = sine * u.
    Eigen::MatrixXd cosine(n, n);
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m)
            cosine(j, m) = scale * k_[m] *
                           std::cos(std::numbers::pi * (j + 1) * (m + 1) /
                                    (n + 1));
    deriv_ = cosine * sine_;
}

Complex radial_inner_product(const RadialGrid& g, const CVector& u,
                             const CVector& v) {
    return g.spacing() * u.dot(v);
}

double radial_norm(const RadialGrid& g, const CVector& u) {
    return std::sqrt(g.spacing()) * u.norm();
}

CVector apply_p_alpha_radial(const RadialGrid& g, const CVector& u,
                             double alpha) {
    CVector c = g.sine() * u;
    for (int m = 0; m < g.n(); ++m) c[m] *= std::pow(g.k()[m], alpha);
    return g.sine() * c;
}

CVector apply_r_power_radial(const RadialGrid& g, const CVector& u,
                             double alpha) {
    CVector out = u;
    for (int j = 0; j < g.n(); ++j) out[j] *= std::pow(g.r()[j], alpha);
    return out;
}

CVector apply_A_radial(const RadialGrid& g, const CVector& u) {
    CVector du = g.derivative() * u;
    CVector out(g.n());
    for (int j = 0; j < g.n(); ++j)
        out[j] = Complex(0.0, -1.0) * (g.r()[j] * du[j] + 0.5 * u[j]);
    return out;
}

CVector apply_H_radial(const RadialGrid& g, const CVector& u,
                       const PotentialSpec& v) {
    CVector out = apply_p_alpha_radial(g, u, 1.0);
    for (int j = 0; j < g.n(); ++j) out[j] += v.value(g.r()[j]) * u[j];
    return out;
}

Eigen::MatrixXd p_alpha_matrix(const RadialGrid& g, double alpha) {
    RVector mult(g.n());
    for (int m = 0; m < g.n(); ++m) mult[m] = std::pow(g.k()[m], alpha);
    return g.sine() * mult.asDiagonal() * g.sine();
}

Eigen::MatrixXd hamiltonian_matrix(const RadialGrid& g,
                                   const PotentialSpec& v) {
    Eigen::MatrixXd h = p_alpha_matrix(g, 1.0);
    for (int j = 0; j < g.n(); ++j) h(j, j) += v.value(g.r()[j]);
    return h;
}

Eigen::MatrixXcd a_matrix(const RadialGrid& g) {
    Eigen::MatrixXcd a(g.n(), g.n());
    const Eigen::MatrixXd& d = g.derivative();
    for (int j = 0; j < g.n(); ++j)
        for (int m = 0; m < g.n(); ++m) {
            const double real = g.r()[j] * d(j, m) + (j == m ? 0.5 : 0.0);
            a(j, m) = Complex(0.0, -real);
        }
    return a;
}

}  // namespace photonlab
