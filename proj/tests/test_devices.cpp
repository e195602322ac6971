#include <cmath>
#include <map>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "mrsim/devices.hpp"

using namespace mrsim;

TEST_CASE("hys equations", "[devices]") {
    HysParams p;
    CHECK(hys_f1(dual_var0(1.0), dual_var1(0.0), p).v == Catch::Approx(1.0));
    CHECK(hys_f1(dual_var0(1.0), dual_var1(20.0), p).v == Catch::Approx(2.0));
    CHECK(hys_f1(dual_var0(-0.5), dual_var1(-20.0), p).v == Catch::Approx(0.0).margin(1e-12));
    // f2 zero set at v = 0 is s in {-1, 0, 1}
    for (const double s : {-1.0, 0.0, 1.0}) {
        CHECK(hys_f2(dual_var0(0.0), dual_var1(s), p).v == Catch::Approx(0.0).margin(1e-9));
    }
    CHECK(hys_f2(dual_var0(0.3), dual_var1(0.0), p).v == Catch::Approx(0.3 / p.tau));
    // rate scales with 1/tau
    HysParams slow;
    slow.tau = 1e-3;
    CHECK(hys_f2(dual_var0(0.3), dual_var1(0.2), slow).v ==
          Catch::Approx(1e-3 * hys_f2(dual_var0(0.3), dual_var1(0.2), p).v));
}

TEST_CASE("rram tunneling current", "[devices]") {
    RramParams p;
    CHECK(rram_f1(dual_var0(0.25), dual_var1(1.0), p).v == Catch::Approx(2.152456068e-5).epsilon(1e-9));
    CHECK(rram_f1(dual_var0(0.0), dual_var1(1.0), p).v == 0.0);
    // odd in vtb, decreasing in gap
    CHECK(rram_f1(dual_var0(-0.4), dual_var1(0.8), p).v ==
          Catch::Approx(-rram_f1(dual_var0(0.4), dual_var1(0.8), p).v));
    double prev = rram_f1(dual_var0(0.3), dual_var1(0.0), p).v;
    for (double gap = 0.1; gap <= 1.7; gap += 0.1) {
        const double cur = rram_f1(dual_var0(0.3), dual_var1(gap), p).v;
        CHECK(cur < prev);
        CHECK(cur > 0.0);
        prev = cur;
    }
}

TEST_CASE("rram gap rate sign structure", "[devices]") {
    RramParams p;
    const double mid = 0.5 * (p.min_gap + p.max_gap);
    // positive bias shrinks the gap, negative bias grows it
    CHECK(rram_f2_star(dual_var0(0.0), dual_var1(mid), p).v == Catch::Approx(0.0).margin(1e-9));
    CHECK(rram_f2_star(dual_var0(0.5), dual_var1(mid), p).v < 0.0);
    CHECK(rram_f2_star(dual_var0(-0.5), dual_var1(mid), p).v > 0.0);
    CHECK(rram_f2_star(dual_var0(0.5), dual_var1(mid), p).v ==
          Catch::Approx(-rram_f2_star(dual_var0(-0.5), dual_var1(mid), p).v));
    // outside the bounds the wall dominates regardless of bias
    for (const double vtb : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
        CHECK(rram_f2_star(dual_var0(vtb), dual_var1(p.min_gap - 0.1), p).v > 0.0);
        CHECK(rram_f2_star(dual_var0(vtb), dual_var1(p.max_gap + 0.1), p).v < 0.0);
    }
}

TEST_CASE("clip_state_rate walls and pass-through", "[devices]") {
    const double kclip = 200.0;
    // deep inside the interval the raw rate passes through
    const Dual2 inside = clip_state_rate(dual_const(3.0), dual_var1(0.5), 0.0, 1.0, kclip, 1e-8, 1e15);
    CHECK(inside.v == Catch::Approx(3.0).epsilon(1e-6));
    // 0.1 past a wall the restoring rate is e^(kclip*0.1)
    const Dual2 low = clip_state_rate(dual_const(0.0), dual_var1(-0.1), 0.0, 1.0, kclip, 1e-8, 1e15);
    const Dual2 high = clip_state_rate(dual_const(0.0), dual_var1(1.1), 0.0, 1.0, kclip, 1e-8, 1e15);
    CHECK(low.v == Catch::Approx(std::exp(20.0)).epsilon(1e-4));
    CHECK(high.v == Catch::Approx(-std::exp(20.0)).epsilon(1e-4));
    // the blend is monotone-decreasing in the state for a zero raw rate
    double prev = clip_state_rate(dual_const(0.0), dual_var1(-0.2), 0.0, 1.0, kclip, 1e-8, 1e15).v;
    for (double s = -0.19; s <= 1.2; s += 0.01) {
        const double cur = clip_state_rate(dual_const(0.0), dual_var1(s), 0.0, 1.0, kclip, 1e-8, 1e15).v;
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("memristor current variants", "[devices]") {
    MemristorParams p;

    p.f1_switch = 1;
    // resistance saturates at Ron / Roff at the state rails
    CHECK(memristor_f1(dual_var0(1.0), dual_var1(1.0), p).v == Catch::Approx(1.0 / p.ron).epsilon(6e-3));
    CHECK(memristor_f1(dual_var0(1.0), dual_var1(0.0), p).v == Catch::Approx(1.0 / p.roff).epsilon(6e-3));
    // the raw linear interpolation has a conductance pole at
    // s = Roff/(Roff - Ron); the clamped form stays near 1/Ron there
    const double pole = p.roff / (p.roff - p.ron);
    const double at_pole = memristor_f1(dual_var0(1.0), dual_var1(pole), p).v;
    CHECK(std::isfinite(at_pole));
    CHECK(at_pole == Catch::Approx(1.0 / p.ron).epsilon(1e-2));
    for (const double s : {-5.0, 5.0}) {
        const double i = memristor_f1(dual_var0(2.0), dual_var1(s), p).v;
        CHECK(std::abs(i) <= 2.0 / p.ron + 1e-9);
        CHECK(std::abs(i) >= 2.0 / p.roff - 1e-9);
    }

    p.f1_switch = 2;
    CHECK(memristor_f1(dual_var0(0.3), dual_var1(0.7), p).v ==
          Catch::Approx(std::exp(-p.lambda * 0.3) * 0.3 / p.ron).epsilon(1e-9));
    CHECK(memristor_f1(dual_var0(0.3), dual_var1(1.0), p).v == Catch::Approx(0.3 / p.ron).epsilon(1e-9));

    p.f1_switch = 3;
    CHECK(memristor_f1(dual_var0(0.0), dual_var1(0.5), p).v == 0.0);
    CHECK(memristor_f1(dual_var0(0.4), dual_var1(0.5), p).v ==
          Catch::Approx(0.25 * p.beta * std::sinh(p.alpha * 0.4) +
                        p.chi * (std::exp(p.gammai * 0.4) - 1.0)).epsilon(1e-9));

    p.f1_switch = 4;
    // a1 branch for positive bias, a2 for negative
    CHECK(memristor_f1(dual_var0(1.0), dual_var1(0.5), p).v ==
          Catch::Approx(p.a1 * 0.5 * std::sinh(p.b)).epsilon(1e-6));
    CHECK(memristor_f1(dual_var0(-1.0), dual_var1(0.5), p).v ==
          Catch::Approx(-p.a2 * 0.5 * std::sinh(p.b)).epsilon(1e-6));

    p.f1_switch = 5;
    // s = 0 maps to the widest gap
    RramParams rr;
    CHECK(memristor_f1(dual_var0(0.25), dual_var1(0.0), p).v ==
          Catch::Approx(rram_f1(dual_var0(0.25), dual_var1(p.max_gap), rr).v).epsilon(1e-12));
}

TEST_CASE("memristor state rate variants", "[devices]") {
    MemristorParams p;

    p.f2_switch = 2;
    CHECK(memristor_f2(dual_var0(0.3), dual_var1(0.2), p).v == Catch::Approx(std::pow(0.3, 3.0)).epsilon(1e-6));

    p.f2_switch = 4;
    // off branch vanishes at its threshold; cubic above it
    CHECK(memristor_f2(dual_var0(p.v_off), dual_var1(0.0), p).v == Catch::Approx(0.0).margin(1e-12));
    CHECK(memristor_f2(dual_var0(0.8), dual_var1(0.0), p).v ==
          Catch::Approx(p.k_off * std::pow(0.3 / p.v_off, p.alpha_off)).epsilon(1e-6));

    p.f2_switch = 5;
    // rate vanishes where vpn hits the state-dependent threshold
    CHECK(memristor_f2(dual_var0(0.0), dual_var1(0.5), p).v == Catch::Approx(0.0).margin(1e-12));
    CHECK(memristor_f2(dual_var0(0.5), dual_var1(0.5), p).v > 0.0);
    CHECK(memristor_f2(dual_var0(-0.5), dual_var1(0.5), p).v < 0.0);

    // clipping keeps every variant restoring at the rails
    std::mt19937 rng(2468);
    std::uniform_real_distribution<double> vd(-1.0, 1.0);
    for (int f2 = 1; f2 <= 6; ++f2) {
        p.f2_switch = f2;
        for (int i = 0; i < 50; ++i) {
            const double v = vd(rng);
            CHECK(memristor_f2_star(dual_var0(v), dual_var1(-0.05), p).v > 0.0);
            CHECK(memristor_f2_star(dual_var0(v), dual_var1(1.05), p).v < 0.0);
        }
    }
}

TEST_CASE("device registry", "[devices]") {
    const auto& reg = device_registry();
    REQUIRE(reg.size() == 9);
    const char* expected[] = {"resistor", "capacitor", "inductor",  "vsource", "isource",
                              "sinhdev",  "hys",       "rram",      "memristor"};
    for (size_t i = 0; i < reg.size(); ++i) {
        CHECK(reg[i].kind == expected[i]);
        CHECK(!reg[i].description.empty());
        for (const auto& p : reg[i].params) {
            CHECK(!p.name.empty());
            CHECK(!p.description.empty());
        }
    }
    CHECK(find_device_info("rram") != nullptr);
    CHECK(find_device_info("RRAM") != nullptr);
    CHECK(find_device_info("bogus") == nullptr);
    CHECK(find_device_info("vsource")->is_source);
    CHECK(!find_device_info("resistor")->is_source);
}

TEST_CASE("build_device validation", "[devices]") {
    CHECK_NOTHROW(build_device("resistor", {}));
    CHECK_NOTHROW(build_device("memristor", {{"f1_switch", 5}, {"f2_switch", 6}}));
    CHECK_THROWS_AS(build_device("warpdrive", {}), std::invalid_argument);
    CHECK_THROWS_AS(build_device("resistor", {{"bogus", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(build_device("resistor", {{"r", 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(build_device("memristor", {{"f1_switch", 7}}), std::invalid_argument);
    CHECK_THROWS_AS(build_device("memristor", {{"f2_switch", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(build_device("memristor", {{"f1_switch", 1.5}}), std::invalid_argument);
    CHECK_THROWS_MATCHES(build_device("memristor", {{"f1_switch", 7}}), std::invalid_argument,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("f1_switch out of range 1..5")));
    CHECK_THROWS_MATCHES(build_device("hys", {{"q", 1.0}}), std::invalid_argument,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("q")));

    // overrides land in the descriptor
    const ModelDescriptor d = build_device("rram", {{"nu0", 2e6}});
    CHECK(d.param("nu0") == Catch::Approx(2e6));
    CHECK(d.param("ea") == Catch::Approx(0.6));
    CHECK(d.model == "rram");
    CHECK(d.x_names.size() == 1);
    CHECK(d.z_names.size() == 1);
    CHECK(d.y_names == std::vector<std::string>{"gap"});
}

TEST_CASE("kind lookup is case-insensitive", "[devices]") {
    const ModelDescriptor a = build_device("Memristor", {});
    CHECK(a.model == "memristor");
}
