#include <benchmark/benchmark.h>

#include "mrsim/analyses.hpp"
#include "mrsim/devices.hpp"

namespace {

mrsim::Circuit rram_testbench() {
    mrsim::Circuit c;
    c.instances.push_back({"v1", "vsource", "1", "0", {{"dc", 1.0}}, {}});
    c.instances.push_back({"r1", "rram", "1", "0", {}, {}});
    return c;
}

void bm_device_eval(benchmark::State& state) {
    const mrsim::ModelDescriptor d = mrsim::build_device("rram", {});
    mrsim::Vec x(1), y(1), u(0);
    x[0] = 0.7;
    y[0] = 0.9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mrsim::evaluate(d, x, y, u));
    }
}
BENCHMARK(bm_device_eval);

void bm_memristor_eval(benchmark::State& state) {
    const mrsim::ModelDescriptor d =
        mrsim::build_device("memristor", {{"f1_switch", 3}, {"f2_switch", 3}});
    mrsim::Vec x(1), y(1), u(0);
    x[0] = 0.7;
    y[0] = 0.4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mrsim::evaluate(d, x, y, u));
    }
}
BENCHMARK(bm_memristor_eval);

void bm_dc_solve(benchmark::State& state) {
    const mrsim::DaeSystem dae = mrsim::DaeSystem::assemble(rram_testbench(), {});
    for (auto _ : state) {
        benchmark::DoNotOptimize(mrsim::dc_operating_point(dae));
    }
}
BENCHMARK(bm_dc_solve);

void bm_transient_step(benchmark::State& state) {
    mrsim::Circuit c = rram_testbench();
    c.instances[0].params["dc"] = 0.0;
    c.instances[0].waveform.has_sine = true;
    c.instances[0].waveform.ampl = 1.5;
    c.instances[0].waveform.freq = 1e3;
    const mrsim::DaeSystem dae = mrsim::DaeSystem::assemble(c, {});
    mrsim::TransientOptions opts;
    opts.t1 = 1e-4;
    opts.dt = 1e-6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mrsim::transient(dae, opts));
    }
}
BENCHMARK(bm_transient_step);

}  // namespace

BENCHMARK_MAIN();
