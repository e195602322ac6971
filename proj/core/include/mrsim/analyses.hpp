#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mrsim/newton.hpp"

namespace mrsim {

/// Sampled multi-column result shared by dc sweeps and transient runs.
struct Waveform {
    std::string axis_name;             ///< "t", swept source name, "lambda"
    std::vector<std::string> columns;  ///< unknown names
    std::vector<double> axis;
    std::vector<Vec> samples;          ///< one entry per axis value
    std::vector<char> point_converged; ///< dc sweeps only; empty = all converged
    bool complete = true;
    std::string message;

    [[nodiscard]] int find_column(const std::string& name) const;
};

/// Solve the DC system at each source value in order, warm-starting from
/// the last converged solution. Non-converged points are recorded and the
/// sweep continues.
Waveform dc_sweep(const DaeSystem& dae, int source_instance, const std::vector<double>& values,
                  const NewtonOptions& opts = {});

struct TransientOptions {
    double t0 = 0.0;
    double t1 = 0.0;
    double dt = 0.0;
    IntegrationMethod method = IntegrationMethod::be;
    /// Pinned unknowns for the t0 operating-point solve.
    std::vector<std::pair<int, double>> initial_conditions;
    NewtonOptions newton;
    int max_halvings = 10;  ///< consecutive failed sub-steps before giving up
};

/// Fixed-step implicit integration (BE or TRAP) on d/dt q(X) + f(X, t) = 0.
/// Steps that fail to converge are retried with halved dt; all accepted
/// points are recorded. Aborts with complete=false after max_halvings.
Waveform transient(const DaeSystem& dae, const TransientOptions& opts);

struct AcResult {
    std::vector<std::string> columns;
    std::vector<double> freq;  ///< Hz
    std::vector<Eigen::VectorXcd> samples;
    std::vector<char> point_ok;
};

/// Small-signal sweep: (G + j*2*pi*f*C) dX = b about the operating point,
/// b the unit stamp of the named source.
AcResult ac_sweep(const DaeSystem& dae, const Vec& operating_point, int source_instance,
                  const std::vector<double>& freqs);

/// Logarithmic frequency grid with pts_per_decade points per decade,
/// inclusive of fstart and ending exactly at fstop (the last interval may
/// be shorter than the log spacing).
std::vector<double> log_frequency_grid(double fstart, double fstop, int pts_per_decade);

struct FoldPoint {
    int index = 0;    ///< sample index where dlambda/ds changes sign
    double lambda = 0.0;
    Vec x;            ///< interpolated circuit unknowns at the fold
};

struct CurveSet {
    std::vector<double> lambda;
    std::vector<Vec> x;
    std::vector<FoldPoint> folds;
    bool complete = true;
    std::string message;
};

struct HomotopyOptions {
    double lambda_min = 0.0;
    double lambda_max = 1.0;
    double h_init = 1e-3;
    double h_min = 1e-9;
    double h_max = 5e-3;
    int corrector_max_iters = 20;
    int grow_threshold = 5;   ///< corrector iterations at or below which h grows
    double grow_factor = 1.5;
    int max_samples = 400000;
    NewtonOptions newton;     ///< options for the starting solve at lambda_min
};

/// Pseudo-arclength continuation of f(X, lambda) = 0, lambda the value of
/// the given source. Starts from a converged solution at lambda_min and
/// tracks the curve (through folds) until lambda exits the range.
CurveSet homotopy(const DaeSystem& dae, int source_instance, const HomotopyOptions& opts);

struct PeriodEstimate {
    bool periodic = false;
    double period = 0.0;
    double amplitude = 0.0;
    double correlation = 0.0;
};

/// Autocorrelation period detector over the trailing half of a waveform
/// column. Periodic iff the first local correlation maximum is >= 0.99 and
/// the amplitude is >= 100*abstol.
PeriodEstimate detect_period(const Waveform& w, int column, double abstol);

}  // namespace mrsim
