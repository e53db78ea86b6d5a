#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace photonlab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Periodic computational box [-L, L)^dim with 2^k nodes per axis.
///
/// Position nodes along each axis are x_j = -L + j*h with h = 2L/N.
/// The momentum lattice is k = (pi/L)*m with integer m in [-N/2, N/2),
/// stored in standard FFT order (m = j for j < N/2, m = j - N otherwise).
class Grid {
public:
    Grid(int dim, int points_per_axis, double half_length);

    int dim() const { return dim_; }
    int points_per_axis() const { return n_; }
    double half_length() const { return length_; }
    double spacing() const { return spacing_; }
    Eigen::Index size() const { return size_; }

    /// Position coordinate of storage index j along one axis.
    double position(int j) const { return -length_ + j * spacing_; }
    /// Momentum coordinate of storage index j along one axis (FFT order).
    double momentum(int j) const {
        return (j < n_ / 2 ? j : j - n_) * fundamental_k_;
    }

    /// |k| at a flat storage index (precomputed).
    const RVector& momentum_magnitude() const { return kmag_; }
    /// |x| at a flat storage index (precomputed).
    const RVector& position_radius() const { return radius_; }

    /// Decomposes a flat index into per-axis indices.
    void unflatten(Eigen::Index idx, int out[3]) const {
        for (int a = 0; a < dim_; ++a) {
            out[a] = static_cast<int>(idx % n_);
            idx /= n_;
        }
    }

    /// Volume element h^dim of the trapezoid-on-torus quadrature.
    double cell_volume() const { return cell_volume_; }

    bool operator==(const Grid& other) const {
        return dim_ == other.dim_ && n_ == other.n_ &&
               length_ == other.length_;
    }

private:
    int dim_;
    int n_;
    double length_;
    double spacing_;
    double fundamental_k_;
    double cell_volume_;
    Eigen::Index size_;
    RVector kmag_;
    RVector radius_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, int points_per_axis, double half_length);

enum class Representation { position, momentum };

/// Complex wavefunction sampled on a Grid, in position or momentum
/// representation. Values are plain Eigen vectors; operations never
/// mutate their inputs.
struct Field {
    GridPtr grid;
    Representation rep = Representation::position;
    CVector values;

    Field() = default;
    Field(GridPtr g, Representation r)
        : grid(std::move(g)), rep(r), values(CVector::Zero(grid->size())) {}
    Field(GridPtr g, Representation r, CVector v)
        : grid(std::move(g)), rep(r), values(std::move(v)) {
        if (values.size() != grid->size())
            throw std::invalid_argument("Field: value count does not match grid");
    }
};

/// Unitary transforms between the two representations. Round trips are
/// identity to machine precision; Parseval holds for the h^dim-weighted
/// inner product in both representations.
Field to_momentum(const Field& f);
Field to_position(const Field& f);
Field in_representation(const Field& f, Representation rep);

/// h^dim-weighted l2 inner product, conjugate-linear in the first slot.
Complex inner_product(const Field& f, const Field& g);
double norm(const Field& f);

struct SmoothStep;

enum class WeightKind { x_power, step_of_x_over_t, step_of_k };

struct Weight {
    WeightKind kind;
    double exponent = 0.0;          // for x_power: <x>^s
    const SmoothStep* step = nullptr;  // for the step weights
    double time = 0.0;              // for step_of_x_over_t
};

double weighted_norm(const Field& f, const Weight& w);

/// Sampled field builders (position representation).
Field make_field(const GridPtr& grid,
                 const std::function<Complex(const double*)>& fn);
Field gaussian_packet(const GridPtr& grid, const double* center, double width,
                      const double* wavevector);
Field normalized(const Field& f);

}  // namespace photonlab
