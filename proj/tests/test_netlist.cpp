#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "mrsim/netlist.hpp"

using namespace mrsim;

TEST_CASE("spice number suffixes", "[netlist]") {
    CHECK(parse_spice_number("2.5meg") == Catch::Approx(2.5e6));
    CHECK(parse_spice_number("2.5MEG") == Catch::Approx(2.5e6));
    CHECK(parse_spice_number("1k") == Catch::Approx(1e3));
    CHECK(parse_spice_number("1m") == Catch::Approx(1e-3));
    CHECK(parse_spice_number("100n") == Catch::Approx(1e-7));
    CHECK(parse_spice_number("2.2u") == Catch::Approx(2.2e-6));
    CHECK(parse_spice_number("5g") == Catch::Approx(5e9));
    CHECK(parse_spice_number("1.5t") == Catch::Approx(1.5e12));
    CHECK(parse_spice_number("3p") == Catch::Approx(3e-12));
    CHECK(parse_spice_number("4f") == Catch::Approx(4e-15));
    CHECK(parse_spice_number("-0.5") == Catch::Approx(-0.5));
    CHECK(parse_spice_number("1e3") == Catch::Approx(1000.0));
    CHECK(parse_spice_number("1E-2") == Catch::Approx(0.01));

    CHECK_THROWS_AS(parse_spice_number(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_spice_number("volts"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spice_number("1x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spice_number("1e999"), std::invalid_argument);
}

TEST_CASE("basic netlist parses", "[netlist]") {
    const std::string text =
        "* comment line\n"
        "; another comment\n"
        "V1 in 0 vsource dc=1 ampl=0.5 freq=1k\n"
        "R1 in out resistor r=2k\n"
        "\n"
        ".dc v1 0 1 0.1 dir=updown\n"
        ".print csv sweep.csv\n";
    const NetlistDocument doc = parse_netlist(text);
    REQUIRE(doc.circuit.instances.size() == 2);
    // names, nodes, kinds are lowercased
    CHECK(doc.circuit.instances[0].name == "v1");
    CHECK(doc.circuit.instances[0].kind == "vsource");
    CHECK(doc.circuit.instances[0].node_p == "in");
    CHECK(doc.circuit.instances[0].waveform.dc == Catch::Approx(1.0));
    CHECK(doc.circuit.instances[0].waveform.has_sine);
    CHECK(doc.circuit.instances[0].waveform.freq == Catch::Approx(1000.0));
    CHECK(doc.circuit.instances[1].params.at("r") == Catch::Approx(2000.0));
    CHECK(doc.circuit.find("r1") != nullptr);
    CHECK(doc.circuit.find("r9") == nullptr);

    REQUIRE(doc.analyses.size() == 1);
    const Analysis& a = doc.analyses[0];
    CHECK(a.kind == AnalysisKind::dc);
    CHECK(a.source == "v1");
    CHECK(a.updown);
    CHECK(a.step == Catch::Approx(0.1));
    CHECK(a.out_path == "sweep.csv");
}

TEST_CASE("tran and homotopy directives", "[netlist]") {
    const NetlistDocument doc = parse_netlist(
        "v1 1 0 vsource pwl=0,0,1,5\n"
        "h1 1 0 hys r=2\n"
        ".tran 1m 2 method=trap ic v(1)=0 s(h1)=1\n"
        ".homotopy v1 -1 1\n"
        ".op\n");
    REQUIRE(doc.analyses.size() == 3);
    CHECK(doc.analyses[0].kind == AnalysisKind::tran);
    CHECK(doc.analyses[0].dt == Catch::Approx(1e-3));
    CHECK(doc.analyses[0].method == IntegrationMethod::trap);
    REQUIRE(doc.analyses[0].initial_conditions.size() == 2);
    CHECK(doc.analyses[0].initial_conditions[0].first == "v(1)");
    CHECK(doc.analyses[0].initial_conditions[1].second == Catch::Approx(1.0));
    CHECK(doc.analyses[1].kind == AnalysisKind::homotopy);
    CHECK(doc.analyses[1].lambda_min == Catch::Approx(-1.0));
    CHECK(doc.analyses[2].kind == AnalysisKind::op);

    const auto& pwl = doc.circuit.instances[0].waveform.pwl;
    REQUIRE(pwl.size() == 2);
    CHECK(pwl[1].first == Catch::Approx(1.0));
    CHECK(doc.circuit.instances[0].waveform.value(0.5) == Catch::Approx(2.5));
    CHECK(doc.circuit.instances[0].waveform.value(9.0) == Catch::Approx(5.0));
    CHECK(doc.circuit.instances[0].waveform.dc_value() == Catch::Approx(0.0));
}

TEST_CASE("parse errors carry line numbers", "[netlist]") {
    const auto line_of = [](const std::string& text) {
        try {
            parse_netlist(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("v1 1 0\n") == 1);
    CHECK(line_of("* ok\nr1 1 0 resistor\nr1 1 0 resistor\n") == 3);
    CHECK(line_of("r1 1 0 flux\n") == 1);
    CHECK(line_of("r1 1 0 resistor r=1 r=2\n") == 1);
    CHECK(line_of("r1 1 0 resistor\n.dc v9 0 1 0.1\n") > 0);
    CHECK(line_of(".unknown\n") == 1);
    CHECK(line_of(".op extra\n") == 1);
    CHECK(line_of(".print csv x.csv\n") == 1);
    CHECK(line_of("v1 1 0 vsource\n.dc v1 0 1 0\n") == 2);
    CHECK(line_of("v1 1 0 vsource\n.dc v1 0 1 -0.1\n") == 2);
    CHECK(line_of("v1 1 0 vsource\n.tran 0 1\n") == 2);
    CHECK(line_of("v1 1 0 vsource\n.tran 1m 1 method=rk4\n") == 2);
    CHECK(line_of("v1 1 0 vsource\n.ac v1 0 1k 10\n") == 2);
    CHECK(line_of("v1 1 0 vsource\n.homotopy v1 1 1\n") == 2);
    CHECK(line_of("v1 1 0 vsource pwl=0,0,0,1\n") == 1);
    CHECK(line_of("v1 1 0 vsource pwl=0,0,1\n") == 1);
    CHECK(line_of("v1 1 0 vsource ampl=1 pwl=0,0,1,1\n") == 1);
    CHECK(line_of("r1 1 0 resistor r=0\n") == 1);
    // a .dc sweeping a non-source is rejected
    CHECK(line_of("v1 1 0 vsource\nr1 1 0 resistor\n.dc r1 0 1 0.1\n") > 0);
}

TEST_CASE("parser survives arbitrary bytes", "[netlist]") {
    std::mt19937 rng(90210);
    std::uniform_int_distribution<int> len(0, 160);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int trial = 0; trial < 3000; ++trial) {
        std::string text;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) {
            text.push_back(static_cast<char>(byte(rng)));
        }
        try {
            (void)parse_netlist(text);
        } catch (const ParseError&) {
            // the documented failure mode
        } catch (...) {
            FAIL("unexpected exception type on fuzz input");
        }
    }
    SUCCEED("no crash");
}

TEST_CASE("format_double round-trips", "[netlist]") {
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-30, 30);
    for (int i = 0; i < 5000; ++i) {
        const double v = mant(rng) * std::pow(10.0, expo(rng));
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(42.0) == "42");
    CHECK(format_double(2.5e6) == "2500000");
}

TEST_CASE("format_circuit reparses to the same circuit", "[netlist]") {
    const std::string text =
        "v1 1 0 vsource dc=0.25 ampl=1 freq=60 phase=0.5\n"
        "v2 5 0 vsource pwl=0,0,1,1,2,0\n"
        "r1 1 2 resistor r=4.7k\n"
        "c1 2 0 capacitor c=1u\n"
        "m1 2 0 memristor f1_switch=2 f2_switch=5 vp=0.8 vn=-0.3\n";
    const NetlistDocument doc = parse_netlist(text);
    const std::string rendered = format_circuit(doc.circuit);
    const NetlistDocument again = parse_netlist(rendered);
    CHECK(again.circuit == doc.circuit);
    // rendering is stable
    CHECK(format_circuit(again.circuit) == rendered);
}

TEST_CASE("shipped netlists parse", "[netlist]") {
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(MRSIM_NETLIST_DIR)) {
        if (entry.path().extension() != ".cir") {
            continue;
        }
        ++seen;
        const NetlistDocument doc = parse_netlist_file(entry.path().string());
        CHECK(!doc.circuit.instances.empty());
        CHECK(!doc.analyses.empty());
    }
    CHECK(seen >= 9);
    CHECK_THROWS_AS(parse_netlist_file("/nonexistent/path.cir"), std::runtime_error);
}
