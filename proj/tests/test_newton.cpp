#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "mrsim/netlist.hpp"
#include "mrsim/newton.hpp"

using namespace mrsim;

namespace {

DaeSystem assemble(const std::string& text, const Tolerances& tol = {}) {
    return DaeSystem::assemble(parse_netlist(text).circuit, tol);
}

}  // namespace

TEST_CASE("linear circuit solves in one step", "[newton]") {
    const DaeSystem dae = assemble(
        "v1 1 0 vsource dc=3\n"
        "r1 1 2 resistor r=1e3\n"
        "r2 2 0 resistor r=2e3\n");
    const SolveReport rep = dc_operating_point(dae, {});
    REQUIRE(rep.converged);
    // one Newton step plus the verifying solve
    CHECK(rep.iterations == 2);
    CHECK(rep.solution[dae.unknown_index("v(2)")] == Catch::Approx(2.0).epsilon(1e-9));
    CHECK(rep.solution[dae.unknown_index("i(v1)")] == Catch::Approx(-1e-3).epsilon(1e-6));
    CHECK(rep.residual_norm <= dae.tolerances().residualtol);
    CHECK(rep.step_norms.size() == static_cast<size_t>(rep.iterations));
}

TEST_CASE("limiting rescues the sinh benchmark", "[newton]") {
    Tolerances tol;
    const DaeSystem dae = assemble(
        "v1 1 0 vsource dc=1000\n"
        "r1 1 2 resistor r=1\n"
        "d1 2 0 sinhdev k=1\n",
        tol);

    NewtonOptions limited;
    const SolveReport a = newton_solve(dae, SolveSpec{}, limited);
    REQUIRE(a.converged);
    CHECK(a.iterations <= 6);
    // solution satisfies sinh(v) = (1000 - v)/1
    const double v = a.solution[dae.unknown_index("v(2)")];
    CHECK(std::sinh(v) == Catch::Approx(1000.0 - v).epsilon(1e-9));

    NewtonOptions raw;
    raw.limiting = false;
    raw.max_iters = 100;
    const SolveReport b = newton_solve(dae, SolveSpec{}, raw);
    CHECK(!b.converged);
    CHECK(b.iterations == 100);
    CHECK(!b.message.empty());
}

TEST_CASE("hys rests at the middle root from zeros", "[newton]") {
    const DaeSystem dae = assemble(
        "v1 1 0 vsource dc=0\n"
        "h1 1 0 hys\n");
    const SolveReport rep = dc_operating_point(dae, {});
    REQUIRE(rep.converged);
    CHECK(rep.solution[dae.unknown_index("s(h1)")] == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("rram dc point at one volt", "[newton]") {
    const DaeSystem dae = assemble(
        "v1 1 0 vsource dc=1\n"
        "m1 1 0 rram\n");
    const SolveReport rep = dc_operating_point(dae, {});
    REQUIRE(rep.converged);
    CHECK(rep.iterations <= 15);
    // the gap is pushed against its lower wall, a hair below zero
    const double gap = rep.solution[dae.unknown_index("gap(m1)")];
    CHECK(gap < 0.0);
    CHECK(gap > -3e-4);
    CHECK(gap == Catch::Approx(-1.872034e-4).epsilon(1e-4));
}

TEST_CASE("initial guess and pinned rows", "[newton]") {
    const DaeSystem dae = assemble(
        "v1 1 0 vsource dc=2\n"
        "r1 1 2 resistor r=1e3\n"
        "r2 2 0 resistor r=1e3\n");

    NewtonOptions opts;
    opts.initial_guess = Vec::Constant(dae.size(), 0.5);
    const SolveReport rep = dc_operating_point(dae, opts);
    REQUIRE(rep.converged);
    CHECK(rep.solution[dae.unknown_index("v(2)")] == Catch::Approx(1.0));

    // pinning v(2) overrides its KCL row
    SolveSpec spec;
    spec.ctx.dc = true;
    spec.pinned.emplace_back(dae.unknown_index("v(2)"), 0.25);
    const SolveReport pinned = newton_solve(dae, spec, {});
    REQUIRE(pinned.converged);
    CHECK(pinned.solution[dae.unknown_index("v(2)")] == Catch::Approx(0.25));
    CHECK(pinned.solution[dae.unknown_index("v(1)")] == Catch::Approx(2.0));
}

TEST_CASE("offset shifts the residual", "[newton]") {
    const DaeSystem dae = assemble(
        "i1 0 1 isource dc=0\n"
        "r1 1 0 resistor r=2\n");
    // r(X) = f(X) + offset; injecting -0.5 A into the KCL row moves the
    // node to v = 1
    SolveSpec spec;
    spec.ctx.dc = true;
    spec.offset = Vec::Zero(dae.size());
    spec.offset[dae.unknown_index("v(1)")] = -0.5;
    const SolveReport rep = newton_solve(dae, spec, {});
    REQUIRE(rep.converged);
    CHECK(rep.solution[dae.unknown_index("v(1)")] == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("singular systems throw", "[newton]") {
    // two ideal sources in parallel forcing different voltages
    const DaeSystem dae = assemble(
        "v1 1 0 vsource dc=1\n"
        "v2 1 0 vsource dc=2\n");
    CHECK_THROWS_AS(dc_operating_point(dae, {}), SolverError);
}

TEST_CASE("convergence needs both small steps and small residual", "[newton]") {
    const DaeSystem dae = assemble(
        "v1 1 0 vsource dc=1\n"
        "m1 1 0 rram\n");
    NewtonOptions starved;
    starved.max_iters = 2;
    const SolveReport rep = newton_solve(dae, SolveSpec{}, starved);
    CHECK(!rep.converged);
    CHECK(rep.message.find("iteration") != std::string::npos);
}
