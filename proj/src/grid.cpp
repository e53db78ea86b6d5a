#include "photonlab/grid.hpp"

#include "photonlab/detail/fourier.hpp"
#include "photonlab/smooth_step.hpp"

#include <cmath>

namespace photonlab {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::Index ipow(int base, int exp) {
    Eigen::Index r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

Grid::Grid(int dim, int points_per_axis, double half_length)
    : dim_(dim), n_(points_per_axis), length_(half_length) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("Grid: dim must be 1, 2 or 3");
    if (n_ < 16 || !is_power_of_two(n_))
        throw std::invalid_argument(
            "Grid: points_per_axis must be a power of two >= 16");
    if (!(half_length > 0))
        throw std::invalid_argument("Grid: half_length must be positive");

    spacing_ = 2.0 * length_ / n_;
    fundamental_k_ = M_PI / length_;
    size_ = ipow(n_, dim_);
    cell_volume_ = std::pow(spacing_, dim_);

    kmag_.resize(size_);
    radius_.resize(size_);
    int idx[3] = {0, 0, 0};
    for (Eigen::Index i = 0; i < size_; ++i) {
        unflatten(i, idx);
        double k2 = 0, r2 = 0;
        for (int a = 0; a < dim_; ++a) {
            const double k = momentum(idx[a]);
            const double x = position(idx[a]);
            k2 += k * k;
            r2 += x * x;
        }
        kmag_[i] = std::sqrt(k2);
        radius_[i] = std::sqrt(r2);
    }
}

GridPtr make_grid(int dim, int points_per_axis, double half_length) {
    return std::make_shared<const Grid>(dim, points_per_axis, half_length);
}

Field to_momentum(const Field& f) {
    if (f.rep != Representation::position)
        throw std::invalid_argument("to_momentum: field already in momentum rep");
    Field out(f.grid, Representation::momentum, f.values);
    detail::fft_all(out.values, *f.grid, true);
    return out;
}

Field to_position(const Field& f) {
    if (f.rep != Representation::momentum)
        throw std::invalid_argument("to_position: field already in position rep");
    Field out(f.grid, Representation::position, f.values);
    detail::fft_all(out.values, *f.grid, false);
    return out;
}

Field in_representation(const Field& f, Representation rep) {
    if (f.rep == rep) return f;
    return rep == Representation::momentum ? to_momentum(f) : to_position(f);
}

Complex inner_product(const Field& f, const Field& g) {
    if (!(*f.grid == *g.grid))
        throw std::invalid_argument("inner_product: grid mismatch");
    if (f.rep != g.rep)
        throw std::invalid_argument("inner_product: representation mismatch");
    return f.grid->cell_volume() * f.values.dot(g.values);
}

double norm(const Field& f) {
    return std::sqrt(f.grid->cell_volume()) * f.values.norm();
}

double weighted_norm(const Field& f, const Weight& w) {
    const Grid& g = *f.grid;
    double acc = 0;
    switch (w.kind) {
        case WeightKind::x_power: {
            if (w.exponent < -2.0 || w.exponent > 4.0)
                throw std::invalid_argument(
                    "weighted_norm: <x>^s exponent outside validated range [-2,4]");
            const Field fp = in_representation(f, Representation::position);
            const RVector& r = g.position_radius();
            for (Eigen::Index i = 0; i < g.size(); ++i) {
                const double wi =
                    std::pow(1.0 + r[i] * r[i], 0.5 * w.exponent);
                acc += wi * wi * std::norm(fp.values[i]);
            }
            break;
        }
        case WeightKind::step_of_x_over_t: {
            if (!(w.time > 0))
                throw std::invalid_argument("weighted_norm: t must be positive");
            const Field fp = in_representation(f, Representation::position);
            const RVector& r = g.position_radius();
            for (Eigen::Index i = 0; i < g.size(); ++i) {
                const double wi = (*w.step)(r[i] / w.time);
                acc += wi * wi * std::norm(fp.values[i]);
            }
            break;
        }
        case WeightKind::step_of_k: {
            const Field fm = in_representation(f, Representation::momentum);
            const RVector& k = g.momentum_magnitude();
            for (Eigen::Index i = 0; i < g.size(); ++i) {
                const double wi = (*w.step)(k[i]);
                acc += wi * wi * std::norm(fm.values[i]);
            }
            break;
        }
    }
    return std::sqrt(g.cell_volume() * acc);
}

Field make_field(const GridPtr& grid,
                 const std::function<Complex(const double*)>& fn) {
    Field f(grid, Representation::position);
    int idx[3];
    double x[3] = {0, 0, 0};
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
        grid->unflatten(i, idx);
        for (int a = 0; a < grid->dim(); ++a) x[a] = grid->position(idx[a]);
        f.values[i] = fn(x);
    }
    return f;
}

Field gaussian_packet(const GridPtr& grid, const double* center, double width,
                      const double* wavevector) {
    const int d = grid->dim();
    return make_field(grid, [&](const double* x) {
        double r2 = 0, phase = 0;
        for (int a = 0; a < d; ++a) {
            const double dx = x[a] - (center ? center[a] : 0.0);
            r2 += dx * dx;
            phase += (wavevector ? wavevector[a] : 0.0) * x[a];
        }
        return std::polar(std::exp(-r2 / (2.0 * width * width)), phase);
    });
}

Field normalized(const Field& f) {
    const double n = norm(f);
    if (!(n > 0)) throw std::runtime_error("normalized: zero field");
    Field out = f;
    out.values /= n;
    return out;
}

}  // namespace photonlab
