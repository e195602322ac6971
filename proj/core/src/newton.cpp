#include "mrsim/newton.hpp"

#include <cmath>
#include <stdexcept>

namespace mrsim {

namespace {

bool triplets_finite(const Triplets& ts) {
    for (const auto& t : ts) {
        if (!std::isfinite(t.value())) {
            return false;
        }
    }
    return true;
}

}  // namespace

SolveReport newton_solve(const DaeSystem& dae, const SolveSpec& spec, const NewtonOptions& opts) {
    const int n = dae.size();
    if (opts.max_iters < 1) {
        throw std::invalid_argument("max_iters must be >= 1");
    }
    if (spec.offset.size() != 0 && spec.offset.size() != n) {
        throw std::invalid_argument("offset size mismatch");
    }

    SolveReport rep;
    Vec x = opts.initial_guess.size() > 0 ? opts.initial_guess : Vec::Zero(n);
    if (x.size() != n) {
        throw std::invalid_argument("initial guess size mismatch");
    }

    const Tolerances& tol = dae.tolerances();
    const bool limiting = opts.limiting && dae.num_limited() > 0;
    Vec lim_old;
    if (limiting) {
        lim_old = dae.limited_exprs(x);
    }

    std::vector<char> pinned_row(static_cast<size_t>(n), 0);
    for (const auto& [row, value] : spec.pinned) {
        pinned_row[static_cast<size_t>(row)] = 1;
    }

    bool last_step_small = false;
    while (true) {
        EvalPoint ep;
        Vec lim_used;
        try {
            if (limiting) {
                lim_used = dae.limit_step(dae.limited_exprs(x), lim_old);
                ep = dae.eval(x, spec.ctx, &lim_used);
            } else {
                ep = dae.eval(x, spec.ctx, nullptr);
            }
        } catch (const ModelError&) {
            if (rep.iterations == 0) {
                throw;
            }
            rep.solution = x;
            rep.message = "evaluation failed at iteration " + std::to_string(rep.iterations);
            return rep;
        }

        Vec r = spec.alpha_f * ep.f + spec.alpha_q * ep.q;
        if (spec.offset.size() > 0) {
            r += spec.offset;
        }
        if (limiting) {
            r += spec.alpha_f * (ep.df_dlim * (dae.limited_exprs(x) - lim_used));
        }

        Triplets jac;
        jac.reserve(ep.G.size() + ep.C.size() + spec.pinned.size());
        for (const auto& t : ep.G) {
            if (spec.alpha_f != 0.0 && !pinned_row[static_cast<size_t>(t.row())]) {
                jac.emplace_back(t.row(), t.col(), spec.alpha_f * t.value());
            }
        }
        for (const auto& t : ep.C) {
            if (spec.alpha_q != 0.0 && !pinned_row[static_cast<size_t>(t.row())]) {
                jac.emplace_back(t.row(), t.col(), spec.alpha_q * t.value());
            }
        }
        for (const auto& [row, value] : spec.pinned) {
            r[row] = x[row] - value;
            jac.emplace_back(row, row, 1.0);
        }

        if (!r.allFinite() || !triplets_finite(jac)) {
            if (rep.iterations == 0) {
                throw ModelError("non-finite residual at the initial point");
            }
            rep.solution = x;
            rep.message = "non-finite residual at iteration " + std::to_string(rep.iterations);
            return rep;
        }

        rep.residual_norm = r.lpNorm<Eigen::Infinity>();
        if (last_step_small && rep.residual_norm <= tol.residualtol) {
            rep.converged = true;
            rep.solution = x;
            return rep;
        }
        if (rep.iterations >= opts.max_iters) {
            rep.solution = x;
            rep.message = "no convergence within " + std::to_string(opts.max_iters) +
                          " iterations";
            return rep;
        }

        const Vec dx = solve_linear(n, jac, -r);
        ++rep.iterations;
        if (limiting) {
            lim_old = lim_used;
        }
        x += dx;
        rep.step_norms.push_back(dx.lpNorm<Eigen::Infinity>());

        if (!x.allFinite()) {
            rep.solution = x;
            rep.message = "iterate diverged to non-finite values";
            return rep;
        }
        last_step_small = true;
        for (int i = 0; i < n; ++i) {
            if (std::abs(dx[i]) > tol.reltol * std::abs(x[i]) + dae.abstol(i)) {
                last_step_small = false;
                break;
            }
        }
    }
}

SolveReport dc_operating_point(const DaeSystem& dae, const NewtonOptions& opts) {
    SolveSpec spec;
    spec.ctx.dc = true;
    return newton_solve(dae, spec, opts);
}

}  // namespace mrsim
