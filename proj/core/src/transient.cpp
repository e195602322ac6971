#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mrsim/analyses.hpp"

namespace mrsim {

Waveform transient(const DaeSystem& dae, const TransientOptions& opts) {
    if (opts.dt <= 0.0 || opts.t1 < opts.t0) {
        throw std::invalid_argument("transient needs dt > 0 and t1 >= t0");
    }
    Waveform w;
    w.axis_name = "t";
    w.columns = dae.unknown_names();
    const int n = dae.size();

    SolveSpec ic_spec;
    ic_spec.ctx.t = opts.t0;
    ic_spec.pinned = opts.initial_conditions;
    NewtonOptions newton = opts.newton;
    if (newton.initial_guess.size() == 0) {
        Vec guess = Vec::Zero(n);
        for (const auto& [idx, value] : opts.initial_conditions) {
            guess[idx] = value;
        }
        newton.initial_guess = guess;
    }
    const SolveReport ic_rep = newton_solve(dae, ic_spec, newton);
    if (!ic_rep.converged) {
        w.complete = false;
        w.message = "operating point at t0 did not converge";
        return w;
    }
    Vec x = ic_rep.solution;

    EvalContext ctx;
    ctx.t = opts.t0;
    EvalPoint ep = dae.eval(x, ctx);
    Vec q_prev = ep.q;
    Vec f_prev = ep.f;
    w.axis.push_back(opts.t0);
    w.samples.push_back(x);

    const double span = opts.t1 - opts.t0;
    const long grid_steps = static_cast<long>(std::ceil(span / opts.dt - 1e-9));
    double t = opts.t0;

    for (long k = 1; k <= grid_steps; ++k) {
        const double t_next = std::min(opts.t0 + static_cast<double>(k) * opts.dt, opts.t1);
        double sub_dt = t_next - t;
        int halvings = 0;
        int streak = 0;
        while (true) {
            const double remaining = t_next - t;
            if (remaining <= 1e-9 * opts.dt) {
                break;
            }
            // Absorb roundoff slivers into the final sub-step; 1/h in the
            // Newton spec blows up residual roundoff when h underflows the
            // natural step scale.
            const double h = remaining <= 1.5 * sub_dt ? remaining : sub_dt;
            SolveSpec spec;
            spec.ctx.t = t + h;
            spec.alpha_q = 1.0 / h;
            spec.alpha_f = opts.method == IntegrationMethod::trap ? 0.5 : 1.0;
            spec.offset = -q_prev / h;
            if (opts.method == IntegrationMethod::trap) {
                spec.offset += 0.5 * f_prev;
            }
            NewtonOptions step_opts = opts.newton;
            step_opts.initial_guess = x;

            bool ok = false;
            Vec next;
            try {
                const SolveReport rep = newton_solve(dae, spec, step_opts);
                ok = rep.converged;
                next = rep.solution;
            } catch (const SolverError&) {
                ok = false;
            } catch (const ModelError&) {
                ok = false;
            }

            if (!ok) {
                ++halvings;
                streak = 0;
                if (halvings > opts.max_halvings) {
                    w.complete = false;
                    w.message = "step at t=" + std::to_string(t) + " failed after " +
                                std::to_string(opts.max_halvings) + " dt halvings";
                    return w;
                }
                sub_dt = 0.5 * h;
                continue;
            }

            halvings = 0;
            t = h == remaining ? t_next : t + h;
            x = next;
            ctx.t = t;
            ep = dae.eval(x, ctx);
            q_prev = ep.q;
            f_prev = ep.f;
            w.axis.push_back(t);
            w.samples.push_back(x);
            if (++streak >= 4 && sub_dt < opts.dt) {
                sub_dt = std::min(2.0 * sub_dt, opts.dt);
                streak = 0;
            }
        }
        t = t_next;
    }
    return w;
}

}  // namespace mrsim
