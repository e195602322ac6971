#include "mrsim/runner.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <limits>

namespace mrsim {

namespace {

namespace fs = std::filesystem;

std::string analysis_tag(AnalysisKind kind) {
    switch (kind) {
        case AnalysisKind::op: return "op";
        case AnalysisKind::dc: return "dc";
        case AnalysisKind::tran: return "tran";
        case AnalysisKind::ac: return "ac";
        case AnalysisKind::homotopy: return "homotopy";
    }
    return "unknown";
}

std::string output_path(const RunOptions& opts, const Analysis& a, size_t index) {
    if (!a.out_path.empty()) {
        const fs::path p(a.out_path);
        if (p.is_absolute()) {
            return p.string();
        }
        return (fs::path(opts.output_dir) / p).string();
    }
    const std::string name = opts.base_name + "_" + std::to_string(index + 1) + "_" +
                             analysis_tag(a.kind) + ".csv";
    return (fs::path(opts.output_dir) / name).string();
}

void write_table(const std::string& path, const std::string& axis_name,
                 const std::vector<std::string>& columns, const std::vector<double>& axis,
                 const std::vector<Vec>& samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << axis_name;
    for (const std::string& c : columns) {
        out << "," << c;
    }
    out << "\n";
    for (size_t i = 0; i < axis.size(); ++i) {
        out << format_double(axis[i]);
        for (int j = 0; j < samples[i].size(); ++j) {
            out << "," << format_double(samples[i][j]);
        }
        out << "\n";
    }
}

std::vector<double> dc_values(const Analysis& a) {
    std::vector<double> values;
    const double tol = 1e-9 * std::abs(a.step);
    if (a.step > 0.0) {
        for (double v = a.start; v <= a.stop + tol; v += a.step) {
            values.push_back(v);
        }
    } else {
        for (double v = a.start; v >= a.stop - tol; v += a.step) {
            values.push_back(v);
        }
    }
    if (a.updown && values.size() > 1) {
        for (size_t i = values.size() - 1; i-- > 0;) {
            values.push_back(values[i]);
        }
    }
    return values;
}

}  // namespace

RunResult run(const NetlistDocument& doc, const RunOptions& opts) {
    RunResult result;
    const DaeSystem dae = DaeSystem::assemble(doc.circuit, opts.tol);
    NewtonOptions newton;
    newton.limiting = opts.limiting;

    fs::create_directories(opts.output_dir);

    for (size_t ai = 0; ai < doc.analyses.size(); ++ai) {
        const Analysis& a = doc.analyses[ai];
        const std::string tag = analysis_tag(a.kind);
        bool failed = false;

        switch (a.kind) {
            case AnalysisKind::op: {
                const SolveReport rep = dc_operating_point(dae, newton);
                failed = !rep.converged;
                result.console += "op: " +
                                  std::string(rep.converged ? "converged in " : "FAILED after ") +
                                  std::to_string(rep.iterations) + " iterations\n";
                if (rep.converged) {
                    for (int i = 0; i < dae.size(); ++i) {
                        result.console +=
                            "  " + dae.unknown_names()[i] + " = " + format_double(rep.solution[i]) +
                            "\n";
                    }
                }
                if (!a.out_path.empty() && rep.converged) {
                    const std::string path = output_path(opts, a, ai);
                    std::ofstream out(path, std::ios::binary);
                    if (!out) {
                        throw std::runtime_error("cannot write '" + path + "'");
                    }
                    for (int i = 0; i < dae.size(); ++i) {
                        out << (i ? "," : "") << dae.unknown_names()[i];
                    }
                    out << "\n";
                    for (int i = 0; i < dae.size(); ++i) {
                        out << (i ? "," : "") << format_double(rep.solution[i]);
                    }
                    out << "\n";
                    result.files.push_back(path);
                }
                break;
            }
            case AnalysisKind::dc: {
                const int src = dae.instance_index(a.source);
                const Waveform w = dc_sweep(dae, src, dc_values(a), newton);
                size_t bad = 0;
                std::vector<Vec> rows = w.samples;
                for (size_t i = 0; i < w.point_converged.size(); ++i) {
                    if (w.point_converged[i] == 0) {
                        ++bad;
                        rows[i].setConstant(std::numeric_limits<double>::quiet_NaN());
                    }
                }
                failed = bad > 0;
                const std::string path = output_path(opts, a, ai);
                write_table(path, w.axis_name, w.columns, w.axis, rows);
                result.files.push_back(path);
                result.console += "dc: " + std::to_string(w.axis.size()) + " points, " +
                                  std::to_string(bad) + " non-converged -> " + path + "\n";
                break;
            }
            case AnalysisKind::tran: {
                TransientOptions topt;
                topt.t0 = 0.0;
                topt.t1 = a.tstop;
                topt.dt = a.dt;
                topt.method = a.method;
                topt.newton = newton;
                for (const auto& [name, value] : a.initial_conditions) {
                    const int idx = dae.unknown_index(name);
                    if (idx < 0) {
                        throw std::runtime_error("unknown initial-condition unknown '" + name +
                                                 "'");
                    }
                    topt.initial_conditions.emplace_back(idx, value);
                }
                const Waveform w = transient(dae, topt);
                failed = !w.complete;
                const std::string path = output_path(opts, a, ai);
                write_table(path, w.axis_name, w.columns, w.axis, w.samples);
                result.files.push_back(path);
                result.console += "tran: " + std::to_string(w.axis.size()) + " points" +
                                  (w.complete ? "" : " (aborted: " + w.message + ")") + " -> " +
                                  path + "\n";
                break;
            }
            case AnalysisKind::ac: {
                const int src = dae.instance_index(a.source);
                const SolveReport op = dc_operating_point(dae, newton);
                if (!op.converged) {
                    failed = true;
                    result.console += "ac: operating point FAILED\n";
                    break;
                }
                const AcResult ac =
                    ac_sweep(dae, op.solution, src, log_frequency_grid(a.fstart, a.fstop,
                                                                       a.pts_per_decade));
                size_t bad = 0;
                for (const char ok : ac.point_ok) {
                    bad += ok == 0 ? 1 : 0;
                }
                failed = bad > 0;
                const std::string path = output_path(opts, a, ai);
                std::ofstream out(path, std::ios::binary);
                if (!out) {
                    throw std::runtime_error("cannot write '" + path + "'");
                }
                out << "f";
                for (const std::string& c : ac.columns) {
                    out << ",mag(" << c << "),phase(" << c << ")";
                }
                out << "\n";
                for (size_t i = 0; i < ac.freq.size(); ++i) {
                    out << format_double(ac.freq[i]);
                    for (int j = 0; j < ac.samples[i].size(); ++j) {
                        out << "," << format_double(std::abs(ac.samples[i][j])) << ","
                            << format_double(std::arg(ac.samples[i][j]));
                    }
                    out << "\n";
                }
                result.files.push_back(path);
                result.console += "ac: " + std::to_string(ac.freq.size()) + " points, " +
                                  std::to_string(bad) + " failed -> " + path + "\n";
                break;
            }
            case AnalysisKind::homotopy: {
                const int src = dae.instance_index(a.source);
                HomotopyOptions hopt;
                hopt.lambda_min = a.lambda_min;
                hopt.lambda_max = a.lambda_max;
                hopt.newton = newton;
                const CurveSet curve = homotopy(dae, src, hopt);
                failed = !curve.complete;
                const std::string path = output_path(opts, a, ai);
                write_table(path, "lambda", dae.unknown_names(), curve.lambda, curve.x);
                result.files.push_back(path);

                fs::path folds_path(path);
                folds_path.replace_extension("");
                folds_path += ".folds.csv";
                std::vector<double> fold_lambda;
                std::vector<Vec> fold_x;
                for (const FoldPoint& f : curve.folds) {
                    fold_lambda.push_back(f.lambda);
                    fold_x.push_back(f.x);
                }
                write_table(folds_path.string(), "lambda", dae.unknown_names(), fold_lambda,
                            fold_x);
                result.files.push_back(folds_path.string());
                result.console += "homotopy: " + std::to_string(curve.lambda.size()) +
                                  " samples, " + std::to_string(curve.folds.size()) + " folds" +
                                  (curve.complete ? "" : " (aborted: " + curve.message + ")") +
                                  " -> " + path + "\n";
                break;
            }
        }
        if (failed) {
            result.exit_code = 1;
        }
    }
    return result;
}

}  // namespace mrsim
