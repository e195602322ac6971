#include <algorithm>
#include <cmath>
#include <optional>

#include "mrsim/analyses.hpp"

namespace mrsim {

namespace {

/// Quadratic through (u0,y0), (0,y1), (u2,y2); returns value at u.
double quad_interp(double u0, double y0, double y1, double u2, double y2, double u) {
    const double a = ((y0 - y1) / u0 - (y2 - y1) / u2) / (u0 - u2);
    const double b = (y0 - y1) / u0 - a * u0;
    return a * u * u + b * u + y1;
}

}  // namespace

CurveSet homotopy(const DaeSystem& dae, int source_instance, const HomotopyOptions& opts) {
    CurveSet curve;
    const int n = dae.size();
    const double range = opts.lambda_max - opts.lambda_min;

    std::map<int, double> overrides;
    EvalContext ctx;
    ctx.dc = true;
    ctx.source_overrides = &overrides;

    {
        SolveSpec spec;
        spec.ctx = ctx;
        overrides[source_instance] = opts.lambda_min;
        SolveReport start;
        try {
            start = newton_solve(dae, spec, opts.newton);
        } catch (const SolverError& e) {
            curve.complete = false;
            curve.message = std::string("starting solve failed: ") + e.what();
            return curve;
        }
        if (!start.converged) {
            curve.complete = false;
            curve.message = "no converged solution at lambda_min";
            return curve;
        }
        curve.lambda.push_back(opts.lambda_min);
        curve.x.push_back(start.solution);
    }

    const Vec b = dae.source_unit_vector(source_instance);
    // Augmented residual/Jacobian at (x, lambda): rows [G | -b] plus the
    // arclength normalization row tau.
    auto eval_aug = [&](const Vec& z, Vec& r, Triplets& jac) {
        overrides[source_instance] = z[n];
        const EvalPoint ep = dae.eval(z.head(n), ctx);
        r = ep.f;
        jac = ep.G;
        for (int i = 0; i < n; ++i) {
            if (b[i] != 0.0) {
                jac.emplace_back(i, n, -b[i]);
            }
        }
    };

    auto tangent_at = [&](const Vec& z, const Vec& tau_prev) -> Vec {
        Vec r;
        Triplets jac;
        eval_aug(z, r, jac);
        for (int i = 0; i <= n; ++i) {
            if (tau_prev[i] != 0.0) {
                jac.emplace_back(n, i, tau_prev[i]);
            }
        }
        Vec rhs = Vec::Zero(n + 1);
        rhs[n] = 1.0;
        Vec tau = solve_linear(n + 1, jac, rhs);
        return tau / tau.norm();
    };

    const Tolerances& tol = dae.tolerances();
    auto step_small = [&](const Vec& dz, const Vec& z) {
        for (int i = 0; i < n; ++i) {
            if (std::abs(dz[i]) > tol.reltol * std::abs(z[i]) + dae.abstol(i)) {
                return false;
            }
        }
        return std::abs(dz[n]) <= tol.reltol * std::abs(z[n]) + tol.abstol_v;
    };

    // Keller corrector: solve f(x, lambda) = 0 with tau^T (z - z_pred) = 0.
    auto correct = [&](const Vec& z_pred, const Vec& tau) -> std::optional<std::pair<Vec, int>> {
        Vec z = z_pred;
        bool last_small = false;
        for (int it = 0; it <= opts.corrector_max_iters; ++it) {
            Vec r;
            Triplets jac;
            try {
                eval_aug(z, r, jac);
            } catch (const ModelError&) {
                return std::nullopt;
            }
            if (!r.allFinite()) {
                return std::nullopt;
            }
            if (last_small && r.lpNorm<Eigen::Infinity>() <= tol.residualtol) {
                return std::make_pair(z, it);
            }
            if (it == opts.corrector_max_iters) {
                return std::nullopt;
            }
            Vec rhs(n + 1);
            rhs.head(n) = -r;
            rhs[n] = -tau.dot(z - z_pred);
            for (int i = 0; i <= n; ++i) {
                if (tau[i] != 0.0) {
                    jac.emplace_back(n, i, tau[i]);
                }
            }
            Vec dz;
            try {
                dz = solve_linear(n + 1, jac, rhs);
            } catch (const SolverError&) {
                return std::nullopt;
            }
            z += dz;
            if (!z.allFinite()) {
                return std::nullopt;
            }
            last_small = step_small(dz, z);
        }
        return std::nullopt;
    };

    Vec z(n + 1);
    z.head(n) = curve.x.back();
    z[n] = opts.lambda_min;
    Vec tau_prev = Vec::Zero(n + 1);
    tau_prev[n] = 1.0;
    double h = opts.h_init;

    while (static_cast<int>(curve.lambda.size()) < opts.max_samples) {
        Vec tau;
        try {
            tau = tangent_at(z, tau_prev);
        } catch (const SolverError& e) {
            curve.complete = false;
            curve.message = std::string("tangent solve failed: ") + e.what();
            break;
        }
        tau_prev = tau;

        std::optional<std::pair<Vec, int>> accepted;
        while (true) {
            accepted = correct(z + h * tau, tau);
            if (accepted.has_value()) {
                break;
            }
            h *= 0.5;
            if (h < opts.h_min) {
                break;
            }
        }
        if (!accepted.has_value()) {
            curve.complete = false;
            curve.message = "corrector failed at minimum step, lambda=" +
                            std::to_string(z[n]);
            break;
        }

        z = accepted->first;
        curve.lambda.push_back(z[n]);
        curve.x.push_back(z.head(n));
        if (accepted->second <= opts.grow_threshold) {
            h = std::min(h * opts.grow_factor, opts.h_max);
        }
        if (z[n] > opts.lambda_max + 1e-12 * range || z[n] < opts.lambda_min - 1e-12 * range) {
            break;
        }
    }
    if (curve.complete && static_cast<int>(curve.lambda.size()) >= opts.max_samples) {
        curve.complete = false;
        curve.message = "sample budget exhausted";
    }

    // Fold markers: sign changes between consecutive significant
    // dlambda increments (tiny increments straddling the turn are skipped).
    const double thresh = 1e-6 * range;
    const int count = static_cast<int>(curve.lambda.size());
    int prev_idx = -1;
    int prev_sign = 0;
    for (int i = 0; i + 1 < count; ++i) {
        const double d = curve.lambda[i + 1] - curve.lambda[i];
        if (std::abs(d) <= thresh) {
            continue;
        }
        const int sign = d > 0.0 ? 1 : -1;
        if (prev_sign != 0 && sign != prev_sign) {
            // extremal sample between the two significant increments
            int k = prev_idx + 1;
            for (int j = prev_idx + 1; j <= i; ++j) {
                const bool better = prev_sign > 0 ? curve.lambda[j] > curve.lambda[k]
                                                  : curve.lambda[j] < curve.lambda[k];
                if (better) {
                    k = j;
                }
            }
            FoldPoint fold;
            fold.index = k;
            fold.lambda = curve.lambda[k];
            fold.x = curve.x[k];
            if (k > 0 && k + 1 < count) {
                const double u0 = -(curve.x[k] - curve.x[k - 1]).norm() -
                                  std::abs(curve.lambda[k] - curve.lambda[k - 1]);
                const double u2 = (curve.x[k + 1] - curve.x[k]).norm() +
                                  std::abs(curve.lambda[k + 1] - curve.lambda[k]);
                if (u0 < 0.0 && u2 > 0.0) {
                    const double a = ((curve.lambda[k - 1] - curve.lambda[k]) / u0 -
                                      (curve.lambda[k + 1] - curve.lambda[k]) / u2) /
                                     (u0 - u2);
                    const double bq = (curve.lambda[k - 1] - curve.lambda[k]) / u0 - a * u0;
                    if (a != 0.0) {
                        const double ustar = std::clamp(-bq / (2.0 * a), u0, u2);
                        fold.lambda = quad_interp(u0, curve.lambda[k - 1], curve.lambda[k], u2,
                                                  curve.lambda[k + 1], ustar);
                        Vec xi(n);
                        for (int c = 0; c < n; ++c) {
                            xi[c] = quad_interp(u0, curve.x[k - 1][c], curve.x[k][c], u2,
                                                curve.x[k + 1][c], ustar);
                        }
                        fold.x = xi;
                    }
                }
            }
            curve.folds.push_back(std::move(fold));
        }
        prev_idx = i;
        prev_sign = sign;
    }
    return curve;
}

}  // namespace mrsim
