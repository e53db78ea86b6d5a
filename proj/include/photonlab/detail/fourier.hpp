#pragma once

#include "photonlab/grid.hpp"

namespace photonlab::detail {

/// In-place unitary transform along one axis, with the convention
///   F_m = N^{-1/2} sum_j f_j exp(-i k_m x_j),   x_j = -L + j h,
/// i.e. a standard DFT followed by a (-1)^j sign flip.
void fft_axis(CVector& values, const Grid& grid, int axis, bool forward);

/// Full transform over all axes (position <-> momentum convention above).
void fft_all(CVector& values, const Grid& grid, bool forward);

/// Replaces values (position representation) by samples of the
/// band-limited interpolant at the axis coordinate scaled by `s`:
///   g(..., x_axis, ...) = f(..., s * x_axis, ...).
/// Evaluated exactly on the trigonometric interpolant via a chirp-z
/// transform; cost O(N log N) per line.
void resample_axis_scaled(CVector& values, const Grid& grid, int axis,
                          double s);

}  // namespace photonlab::detail
