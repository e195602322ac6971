#include <cmath>
#include <limits>

#include <catch2/catch_amalgamated.hpp>

#include "mrsim/limiting.hpp"
#include "mrsim/modspec.hpp"

using namespace mrsim;

namespace {

// One branch input, one internal unknown, one sinhlim-limited expression
// x - y. fe = sinh(2*lim) + q-charge x^2, fi = y - x/2.
ModelDescriptor toy_model(double slope_error = 0.0) {
    ModelDescriptor d;
    d.model = "toy";
    d.x_names = {"v"};
    d.z_names = {"i"};
    d.y_names = {"s"};
    d.params = {{"k", 2.0}};

    LimitedVarSpec lv;
    lv.name = "vd";
    lv.limiter = LimitedVarSpec::Limiter::sinhlim;
    lv.k = 2.0;
    lv.x_coeff = Vec::Constant(1, 1.0);
    lv.y_coeff = Vec::Constant(1, -1.0);
    d.limited = {lv};

    d.eval_fn = [slope_error](const Vec& x, const Vec& y, const Vec&, const Vec& lim) {
        EvalResult r;
        r.fe = Vec::Constant(1, std::sinh(2.0 * lim[0]));
        r.qe = Vec::Constant(1, x[0] * x[0]);
        r.fi = Vec::Constant(1, y[0] - 0.5 * x[0]);
        r.qi = Vec::Zero(1);
        const double g = 2.0 * std::cosh(2.0 * lim[0]) * (1.0 + slope_error);
        r.dfe_dx = Mat::Constant(1, 1, g);        // chain through lim = x - y
        r.dfe_dy = Mat::Constant(1, 1, -g);
        r.dqe_dx = Mat::Constant(1, 1, 2.0 * x[0]);
        r.dqe_dy = Mat::Zero(1, 1);
        r.dfi_dx = Mat::Constant(1, 1, -0.5);
        r.dfi_dy = Mat::Constant(1, 1, 1.0);
        r.dqi_dx = Mat::Zero(1, 1);
        r.dqi_dy = Mat::Zero(1, 1);
        r.dfe_dlim = Mat::Constant(1, 1, 2.0 * std::cosh(2.0 * lim[0]));
        r.dfi_dlim = Mat::Zero(1, 1);
        return r;
    };
    return d;
}

}  // namespace

TEST_CASE("evaluate substitutes limited expressions identically by default", "[modspec]") {
    const ModelDescriptor d = toy_model();
    const Vec x = Vec::Constant(1, 0.8);
    const Vec y = Vec::Constant(1, 0.3);
    const Vec u;

    const Vec lims = limited_expressions(d, x, y);
    REQUIRE(lims.size() == 1);
    CHECK(lims[0] == Catch::Approx(0.5));

    const EvalResult a = evaluate(d, x, y, u);
    const EvalResult b = evaluate(d, x, y, u, &lims);
    CHECK(a.fe[0] == b.fe[0]);
    CHECK(a.fe[0] == Catch::Approx(std::sinh(1.0)));
    CHECK(a.fi[0] == Catch::Approx(0.3 - 0.4));

    // substituted value overrides the expression
    const Vec other = Vec::Constant(1, 0.0);
    const EvalResult c = evaluate(d, x, y, u, &other);
    CHECK(c.fe[0] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("evaluate rejects contract violations", "[modspec]") {
    ModelDescriptor d = toy_model();
    const Vec x1 = Vec::Constant(1, 0.1);
    const Vec y1 = Vec::Constant(1, 0.2);

    CHECK_THROWS_AS(evaluate(d, Vec::Zero(2), y1, Vec()), ModelError);
    CHECK_THROWS_AS(evaluate(d, x1, Vec::Zero(3), Vec()), ModelError);
    CHECK_THROWS_AS(evaluate(d, x1, y1, Vec::Zero(1)), ModelError);

    // non-finite output names the offending entry
    d.eval_fn = [base = d.eval_fn](const Vec& x, const Vec& y, const Vec& u, const Vec& lim) {
        EvalResult r = base(x, y, u, lim);
        r.fe[0] = std::numeric_limits<double>::quiet_NaN();
        return r;
    };
    CHECK_THROWS_MATCHES(evaluate(d, x1, y1, Vec()), ModelError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("non-finite fe[0]")));

    // mis-sized Jacobian
    d.eval_fn = [base = toy_model().eval_fn](const Vec& x, const Vec& y, const Vec& u, const Vec& lim) {
        EvalResult r = base(x, y, u, lim);
        r.dfi_dy = Mat::Zero(2, 2);
        return r;
    };
    CHECK_THROWS_MATCHES(evaluate(d, x1, y1, Vec()), ModelError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("dfi_dy")));
}

TEST_CASE("param lookup", "[modspec]") {
    const ModelDescriptor d = toy_model();
    CHECK(d.param("k") == Catch::Approx(2.0));
    CHECK_THROWS_AS(d.param("missing"), std::invalid_argument);
}

TEST_CASE("limit_step applies the declared limiter", "[modspec]") {
    const ModelDescriptor d = toy_model();
    const Vec proposed = Vec::Constant(1, 6.0);
    const Vec old_vals = Vec::Constant(1, 0.0);
    const Vec limited = limit_step(d, proposed, old_vals);
    CHECK(limited[0] == Catch::Approx(sinhlim(6.0, 0.0, 2.0)));
    CHECK(limited[0] < 6.0);

    // small steps pass through unchanged up to roundoff
    const Vec small = Vec::Constant(1, 0.01);
    CHECK(limit_step(d, small, old_vals)[0] == Catch::Approx(0.01).epsilon(1e-3));

    ModelDescriptor none = toy_model();
    none.limited[0].limiter = LimitedVarSpec::Limiter::none;
    CHECK(limit_step(none, proposed, old_vals)[0] == 6.0);

    CHECK_THROWS_AS(limit_step(d, Vec::Zero(2), Vec::Zero(2)), ModelError);
}

TEST_CASE("check_jacobians flags a wrong derivative", "[modspec]") {
    const Vec x = Vec::Constant(1, 0.4);
    const Vec y = Vec::Constant(1, -0.2);
    CHECK(check_jacobians(toy_model(), x, y, Vec()) < 1e-6);
    CHECK(check_jacobians(toy_model(0.1), x, y, Vec()) > 1e-3);
}
