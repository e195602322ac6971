#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mrsim/dae.hpp"

namespace mrsim {

struct NewtonOptions {
    int max_iters = 100;
    bool limiting = true;
    Vec initial_guess;  ///< empty = all zeros
};

struct SolveReport {
    Vec solution;
    int iterations = 0;  ///< linear solves, including the final verifying step
    bool converged = false;
    double residual_norm = 0.0;
    std::vector<double> step_norms;  ///< max-norm of each Newton step
    std::string message;             ///< non-convergence diagnostic
};

/// Residual form handed to Newton:
///   r(X) = alpha_q * q(X) + alpha_f * f(X, ctx) + offset
/// with every row listed in `pinned` replaced by X[i] - value (identity
/// Jacobian row). Covers DC (alpha_q = 0), BE and TRAP steps, and
/// initial-condition solves.
struct SolveSpec {
    EvalContext ctx;
    double alpha_q = 0.0;
    double alpha_f = 1.0;
    Vec offset;  ///< empty = zero
    std::vector<std::pair<int, double>> pinned;
};

/// Damped-by-limiting Newton-Raphson. Convergence requires the last step
/// to satisfy |dX_i| <= reltol*|X_i| + abstol(i) for every unknown AND the
/// current residual to satisfy ||r||_inf <= residualtol. Throws SolverError
/// on a singular Jacobian and ModelError if the initial point cannot be
/// evaluated; later evaluation failures end the solve as non-converged.
SolveReport newton_solve(const DaeSystem& dae, const SolveSpec& spec, const NewtonOptions& opts);

/// DC operating point: solve f(X) = 0 with dc source values.
SolveReport dc_operating_point(const DaeSystem& dae, const NewtonOptions& opts = {});

}  // namespace mrsim
