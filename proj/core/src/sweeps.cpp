#include "mrsim/analyses.hpp"

#include <cmath>
#include <numbers>

namespace mrsim {

int Waveform::find_column(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

Waveform dc_sweep(const DaeSystem& dae, int source_instance, const std::vector<double>& values,
                  const NewtonOptions& opts) {
    Waveform w;
    w.axis_name = dae.instances()[source_instance].name;
    w.columns = dae.unknown_names();

    std::map<int, double> overrides;
    SolveSpec spec;
    spec.ctx.dc = true;
    spec.ctx.source_overrides = &overrides;

    NewtonOptions point_opts = opts;
    Vec guess = opts.initial_guess.size() > 0 ? opts.initial_guess : Vec::Zero(dae.size());
    for (const double value : values) {
        overrides[source_instance] = value;
        bool ok = false;
        Vec solution = guess;
        // Warm start from the previous point; if that stalls (typical just
        // past a fold, where the old branch has vanished), retry cold.
        for (Vec start : {guess, Vec(Vec::Zero(dae.size()))}) {
            point_opts.initial_guess = start;
            try {
                const SolveReport rep = newton_solve(dae, spec, point_opts);
                ok = rep.converged;
                if (rep.solution.allFinite()) {
                    solution = rep.solution;
                }
            } catch (const SolverError&) {
                ok = false;
            }
            if (ok) {
                break;
            }
        }
        w.axis.push_back(value);
        w.samples.push_back(solution);
        w.point_converged.push_back(ok ? 1 : 0);
        if (ok) {
            guess = solution;
        }
    }
    return w;
}

std::vector<double> log_frequency_grid(double fstart, double fstop, int pts_per_decade) {
    std::vector<double> freqs;
    const double ratio = std::pow(10.0, 1.0 / pts_per_decade);
    double f = fstart;
    for (int i = 0; f < fstop * (1.0 - 1e-12); ++i) {
        freqs.push_back(f);
        f = fstart * std::pow(ratio, i + 1);
    }
    freqs.push_back(fstop);
    return freqs;
}

AcResult ac_sweep(const DaeSystem& dae, const Vec& operating_point, int source_instance,
                  const std::vector<double>& freqs) {
    AcResult out;
    out.columns = dae.unknown_names();
    const int n = dae.size();

    EvalContext ctx;
    ctx.dc = true;
    const EvalPoint ep = dae.eval(operating_point, ctx);
    const Vec b = dae.source_unit_vector(source_instance);

    for (const double f : freqs) {
        const std::complex<double> jw(0.0, 2.0 * std::numbers::pi * f);
        std::vector<Eigen::Triplet<std::complex<double>>> entries;
        entries.reserve(ep.G.size() + ep.C.size());
        for (const auto& t : ep.G) {
            entries.emplace_back(t.row(), t.col(), std::complex<double>(t.value(), 0.0));
        }
        for (const auto& t : ep.C) {
            entries.emplace_back(t.row(), t.col(), jw * t.value());
        }
        out.freq.push_back(f);
        try {
            out.samples.push_back(solve_linear_complex(n, entries, b.cast<std::complex<double>>()));
            out.point_ok.push_back(1);
        } catch (const SolverError&) {
            out.samples.push_back(Eigen::VectorXcd::Zero(n));
            out.point_ok.push_back(0);
        }
    }
    return out;
}

PeriodEstimate detect_period(const Waveform& w, int column, double abstol) {
    PeriodEstimate est;
    const int total = static_cast<int>(w.samples.size());
    const int begin = total / 2;
    const int n = total - begin;
    if (n < 8) {
        return est;
    }

    Vec y(n);
    for (int i = 0; i < n; ++i) {
        y[i] = w.samples[begin + i][column];
    }
    const double mean = y.mean();
    y.array() -= mean;
    est.amplitude = 0.5 * (y.maxCoeff() - y.minCoeff());
    if (est.amplitude < 100.0 * abstol) {
        return est;
    }

    const double dt = (w.axis[total - 1] - w.axis[begin]) / (n - 1);
    const int max_lag = n / 2;
    auto corr_at = [&](int lag) {
        double num = 0.0;
        double den_a = 0.0;
        double den_b = 0.0;
        for (int i = 0; i + lag < n; ++i) {
            num += y[i] * y[i + lag];
            den_a += y[i] * y[i];
            den_b += y[i + lag] * y[i + lag];
        }
        const double den = std::sqrt(den_a * den_b);
        return den > 0.0 ? num / den : 0.0;
    };

    std::vector<double> corr(static_cast<size_t>(max_lag) + 1);
    for (int lag = 0; lag <= max_lag; ++lag) {
        corr[static_cast<size_t>(lag)] = corr_at(lag);
    }
    for (int lag = 2; lag < max_lag; ++lag) {
        const double cm = corr[static_cast<size_t>(lag - 1)];
        const double c0 = corr[static_cast<size_t>(lag)];
        const double cp = corr[static_cast<size_t>(lag + 1)];
        if (c0 >= 0.99 && c0 >= cm && c0 >= cp) {
            double refined = static_cast<double>(lag);
            const double denom = cm - 2.0 * c0 + cp;
            if (denom < 0.0) {
                refined += 0.5 * (cm - cp) / denom;
            }
            est.periodic = true;
            est.period = refined * dt;
            est.correlation = c0;
            return est;
        }
    }
    return est;
}

}  // namespace mrsim
