#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "mrsim/devices.hpp"
#include "mrsim/runner.hpp"

namespace {

int cmd_run(const std::string& file, const mrsim::RunOptions& opts_in) {
    mrsim::NetlistDocument doc;
    try {
        doc = mrsim::parse_netlist_file(file);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: %s\n", file.c_str(), e.what());
        return 1;
    }
    mrsim::RunOptions opts = opts_in;
    opts.base_name = std::filesystem::path(file).stem().string();
    try {
        const mrsim::RunResult result = mrsim::run(doc, opts);
        std::fputs(result.console.c_str(), stdout);
        return result.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: %s\n", file.c_str(), e.what());
        return 1;
    }
}

int cmd_check(const std::string& file) {
    try {
        const mrsim::NetlistDocument doc = mrsim::parse_netlist_file(file);
        const mrsim::DaeSystem dae = mrsim::DaeSystem::assemble(doc.circuit, {});
        std::printf("ok: %zu instances, %d unknowns, %zu analyses\n",
                    doc.circuit.instances.size(), dae.size(), doc.analyses.size());
        for (const std::string& name : dae.unknown_names()) {
            std::printf("  %s\n", name.c_str());
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: %s\n", file.c_str(), e.what());
        return 1;
    }
}

int cmd_models() {
    for (const mrsim::DeviceInfo& info : mrsim::device_registry()) {
        std::printf("%s - %s\n", info.kind.c_str(), info.description.c_str());
        for (const mrsim::DeviceParamInfo& p : info.params) {
            std::printf("  %-10s %-12g %s\n", p.name.c_str(), p.default_value,
                        p.description.c_str());
        }
        if (info.kind == "memristor") {
            std::printf("  (f1_switch 1..5 x f2_switch 1..6: 30 valid combinations)\n");
        }
    }
    return 0;
}

int cmd_bench_sinhlim() {
    mrsim::Circuit circuit;
    circuit.instances.push_back({"v1", "vsource", "1", "0", {}, {}});
    circuit.instances.push_back({"r1", "resistor", "1", "2", {{"r", 1.0}}, {}});
    circuit.instances.push_back({"d1", "sinhdev", "2", "0", {{"k", 1.0}}, {}});

    const mrsim::DaeSystem dae = mrsim::DaeSystem::assemble(circuit, {});
    const int src = dae.instance_index("v1");

    std::printf("%-8s %-14s %s\n", "V", "with sinhlim", "without");
    for (const double v : {1.0, 10.0, 100.0, 1000.0}) {
        std::map<int, double> overrides{{src, v}};
        mrsim::SolveSpec spec;
        spec.ctx.dc = true;
        spec.ctx.source_overrides = &overrides;

        std::string cols[2];
        for (const bool limiting : {true, false}) {
            mrsim::NewtonOptions opts;
            opts.limiting = limiting;
            try {
                const mrsim::SolveReport rep = mrsim::newton_solve(dae, spec, opts);
                cols[limiting ? 0 : 1] =
                    rep.converged ? std::to_string(rep.iterations) : std::string("NC");
            } catch (const std::exception&) {
                cols[limiting ? 0 : 1] = "NC";
            }
        }
        std::printf("%-8g %-14s %s\n", v, cols[0].c_str(), cols[1].c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mrsim: memristive-device circuit simulator"};
    app.require_subcommand(1);

    std::string run_file;
    mrsim::RunOptions run_opts;
    CLI::App* run = app.add_subcommand("run", "parse a netlist and execute its analyses");
    run->add_option("file", run_file, "netlist file")->required();
    run->add_option("--out", run_opts.output_dir, "output directory (default .)");
    run->add_option("--reltol", run_opts.tol.reltol, "relative tolerance");
    run->add_option("--abstol-v", run_opts.tol.abstol_v, "absolute tolerance, voltages");
    run->add_option("--abstol-i", run_opts.tol.abstol_i, "absolute tolerance, currents");
    run->add_option("--residualtol", run_opts.tol.residualtol, "residual tolerance");
    run->add_option("--gmin", run_opts.tol.gmin, "gmin conductance");
    bool no_limiting = false;
    run->add_flag("--no-limiting", no_limiting, "disable NR limiting");

    std::string check_file;
    CLI::App* check = app.add_subcommand("check", "parse and assemble only");
    check->add_option("file", check_file, "netlist file")->required();

    CLI::App* models = app.add_subcommand("models", "list device kinds and parameters");

    std::string bench_what;
    CLI::App* bench = app.add_subcommand("bench", "built-in experiments");
    bench->add_option("what", bench_what, "experiment name (sinhlim)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (run->parsed()) {
        run_opts.limiting = !no_limiting;
        return cmd_run(run_file, run_opts);
    }
    if (check->parsed()) {
        return cmd_check(check_file);
    }
    if (models->parsed()) {
        return cmd_models();
    }
    if (bench->parsed()) {
        if (bench_what != "sinhlim") {
            std::fprintf(stderr, "unknown benchmark '%s' (try: sinhlim)\n", bench_what.c_str());
            return 2;
        }
        return cmd_bench_sinhlim();
    }
    return 2;
}
