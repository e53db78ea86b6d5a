#include "photonlab/detail/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <vector>

namespace photonlab::detail {

namespace {

// Iterates over all 1D lines along `axis`, gathering into a contiguous
// buffer, applying `fn`, and scattering back.
template <typename Fn>
void for_each_line(CVector& values, const Grid& grid, int axis, Fn&& fn) {
    const int n = grid.points_per_axis();
    const int dim = grid.dim();
    Eigen::Index stride = 1;
    for (int a = 0; a < axis; ++a) stride *= n;
    const Eigen::Index lines = grid.size() / n;

    std::vector<Complex> buf(n);
    for (Eigen::Index l = 0; l < lines; ++l) {
        // Flat index of the line's first element: insert 0 at `axis`.
        const Eigen::Index lo = l % stride;
        const Eigen::Index hi = l / stride;
        const Eigen::Index base = lo + hi * stride * n;
        for (int j = 0; j < n; ++j) buf[j] = values[base + j * stride];
        fn(buf);
        for (int j = 0; j < n; ++j) values[base + j * stride] = buf[j];
    }
}

struct ChirpPlan {
    int n;
    Eigen::Index m;  // FFT length, >= 3n
    std::vector<Complex> input_phase;   // exp(i pi s (mt^2/n - mt)), mt = p - n/2
    std::vector<Complex> output_phase;  // n^{-1/2} exp(i pi s j^2 / n)
    std::vector<Complex> kernel_fft;    // FFT of b_k = exp(-i pi s k^2 / n)
    mutable Eigen::FFT<double> fft;

    ChirpPlan(int n_, double s) : n(n_) {
        m = 4;
        while (m < 3 * static_cast<Eigen::Index>(n)) m *= 2;
        const double pi = std::numbers::pi;
        input_phase.resize(n);
        for (int p = 0; p < n; ++p) {
            const double mt = p - n / 2.0;
            const double phase = pi * s * (mt * mt / n - mt);
            input_phase[p] = std::polar(1.0, phase);
        }
        output_phase.resize(n);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (int j = 0; j < n; ++j)
            output_phase[j] = scale * std::polar(1.0, pi * s * j * j / n);

        // Kernel covers lags k = q - n/2 for q in [0, 2n).
        std::vector<Complex> b(m, Complex(0, 0));
        for (Eigen::Index q = 0; q < 2 * n; ++q) {
            const double k = static_cast<double>(q) - n / 2.0;
            b[q] = std::polar(1.0, -pi * s * k * k / n);
        }
        kernel_fft.resize(m);
        fft.fwd(kernel_fft, b);
    }

    // line holds momentum coefficients F_mt (FFT storage order); replaced
    // by position samples g_j = n^{-1/2} sum F_mt exp(i k_mt s x_j).
    void apply(std::vector<Complex>& line) const {
        std::vector<Complex> a(m, Complex(0, 0));
        for (int p = 0; p < n; ++p) {
            // momentum storage order -> mt-ascending order (p = mt + n/2)
            const int storage = (p + n / 2) % n;
            a[p] = line[storage] * input_phase[p];
        }
        std::vector<Complex> af(m), cf(m), c(m);
        fft.fwd(af, a);
        for (Eigen::Index i = 0; i < m; ++i) cf[i] = af[i] * kernel_fft[i];
        fft.inv(c, cf);
        for (int j = 0; j < n; ++j) line[j] = c[j + n] * output_phase[j];
    }
};

}  // namespace

void fft_axis(CVector& values, const Grid& grid, int axis, bool forward) {
    const int n = grid.points_per_axis();
    Eigen::FFT<double> fft;
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<Complex> out(n);
    for_each_line(values, grid, axis, [&](std::vector<Complex>& buf) {
        if (forward) {
            fft.fwd(out, buf);
            for (int j = 0; j < n; ++j)
                buf[j] = out[j] * ((j & 1) ? -1.0 / root_n : 1.0 / root_n);
        } else {
            for (int j = 0; j < n; ++j)
                if (j & 1) buf[j] = -buf[j];
            fft.inv(out, buf);
            for (int j = 0; j < n; ++j) buf[j] = out[j] * root_n;
        }
    });
}

void fft_all(CVector& values, const Grid& grid, bool forward) {
    for (int a = 0; a < grid.dim(); ++a) fft_axis(values, grid, a, forward);
}

void resample_axis_scaled(CVector& values, const Grid& grid, int axis,
                          double s) {
    fft_axis(values, grid, axis, true);
    const ChirpPlan plan(grid.points_per_axis(), s);
    const int n = grid.points_per_axis();
    for_each_line(values, grid, axis, [&](std::vector<Complex>& buf) {
        plan.apply(buf);
        if (s > 1.0) {
            // Scaled sample points s*x_j beyond the box would alias onto
            // the periodic extension; the true field vanishes there.
            for (int j = 0; j < n; ++j)
                if (std::abs(grid.position(j)) * s >= grid.half_length())
                    buf[j] = Complex(0, 0);
        }
    });
}

}  // namespace photonlab::detail
