#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mrsim {

/// Time-dependent source value: dc offset plus an optional sine or an
/// optional piecewise-linear ramp (first-to-last breakpoint, clamped
/// outside).
struct SourceWaveform {
    double dc = 0.0;
    bool has_sine = false;
    double ampl = 0.0;
    double freq = 0.0;
    double phase = 0.0;
    std::vector<std::pair<double, double>> pwl;  ///< (time, value), strictly increasing times

    [[nodiscard]] double value(double t) const;

    /// Value used by dc analyses: the dc offset (sine contributes nothing)
    /// plus the t = 0 value of the pwl ramp.
    [[nodiscard]] double dc_value() const;

    bool operator==(const SourceWaveform&) const = default;
};

/// One netlist element: `name node_p node_n kind key=value ...`.
struct Instance {
    std::string name;
    std::string kind;
    std::string node_p;
    std::string node_n;
    std::map<std::string, double> params;
    SourceWaveform waveform;  ///< only meaningful for vsource/isource

    [[nodiscard]] bool is_source() const { return kind == "vsource" || kind == "isource"; }

    bool operator==(const Instance&) const = default;
};

struct Circuit {
    std::vector<Instance> instances;

    [[nodiscard]] const Instance* find(const std::string& name) const;

    bool operator==(const Circuit&) const = default;
};

enum class AnalysisKind { op, dc, tran, ac, homotopy };

enum class IntegrationMethod { be, trap };

/// One analysis directive, already validated by the parser.
struct Analysis {
    AnalysisKind kind = AnalysisKind::op;
    std::string source;  ///< swept/driven source name (dc, ac, homotopy)

    // .dc
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    bool updown = false;

    // .tran
    double dt = 0.0;
    double tstop = 0.0;
    IntegrationMethod method = IntegrationMethod::be;
    std::vector<std::pair<std::string, double>> initial_conditions;  ///< unknown name -> value

    // .ac
    double fstart = 0.0;
    double fstop = 0.0;
    int pts_per_decade = 0;

    // .homotopy
    double lambda_min = 0.0;
    double lambda_max = 0.0;

    std::string out_path;  ///< from .print csv; empty -> auto-named

    bool operator==(const Analysis&) const = default;
};

struct NetlistDocument {
    Circuit circuit;
    std::vector<Analysis> analyses;

    bool operator==(const NetlistDocument&) const = default;
};

}  // namespace mrsim
