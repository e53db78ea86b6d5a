#pragma once

#include "photonlab/grid.hpp"
#include "photonlab/operators.hpp"

#include <functional>
#include <string>
#include <vector>

namespace photonlab {

enum class Scheme { strang, krylov_reference };

/// Evolution setup. Invariants checked by evolve():
///  - dt * lambda_max < 0.5 (phase rotation resolved per step)
///  - initial support radius + T < 0.9 L (box no-wrap budget; the group
///    speed of |p| is exactly 1)
struct EvolutionPlan {
    double dt = 0.01;
    double final_time = 1.0;
    Scheme scheme = Scheme::strang;
    int krylov_dim = 16;

    /// Observable callback, invoked every `callback_stride` steps
    /// (including t = 0 and the final state) with a read-only snapshot.
    std::function<void(const Field&, double)> callback;
    int callback_stride = 1;

    /// Checkpoint sink, invoked every `checkpoint_stride` steps when the
    /// stride is positive (delegation point for the I/O layer).
    std::function<void(const Field&, double)> checkpoint_sink;
    int checkpoint_stride = 0;

    bool enforce_no_wrap = true;
};

struct EvolutionResult {
    Field final_state;
    double reached_time = 0.0;
    bool completed = true;   // false when a callback aborted the run
    std::string failure;     // callback error message when !completed
};

/// One Strang step e^{-iV dt/2} e^{-i|p| dt} e^{-iV dt/2} f. Each factor
/// is exact in its own representation, so the step is unitary to
/// rounding; the local splitting error is O(dt^3).
Field strang_step(const Field& f, const HamiltonianSpec& h, double dt);

/// Lanczos-subspace evaluation of e^{-iH dt} f with an a-posteriori
/// error estimate; the subspace grows (up to 4m) until the estimate is
/// below 1e-10, else the step is rejected with a smaller-dt suggestion.
Field krylov_reference_step(const Field& f, const HamiltonianSpec& h,
                            double dt, int m = 16);

EvolutionResult evolve(const Field& f0, const EvolutionPlan& plan,
                       const HamiltonianSpec& h);

}  // namespace photonlab
