#include <doctest.h>

#include <cmath>
#include <limits>

#include "veris/models.hpp"
#include "veris/variation.hpp"

using namespace veris;
using variation::RegulatedCurve;

namespace {

RisModel frozen_quadratic()
{
    models::ConvexQuadraticParams p;
    p.load = LoadProfile::linear(0.0, 0.0);
    return models::convex_quadratic_model(p);
}

RegulatedCurve ramp_curve(int n, double from, double to)
{
    RegulatedCurve c;
    for (int i = 0; i <= n; ++i) {
        c.sample_times.push_back(static_cast<double>(i) / n);
        c.sample_states.push_back(state1(from + (to - from) * i / n));
    }
    return c;
}

}  // namespace

TEST_CASE("pointwise variation of simple curves")
{
    const RisModel m = frozen_quadratic();

    RegulatedCurve constant;
    for (int i = 0; i <= 10; ++i) {
        constant.sample_times.push_back(i / 10.0);
        constant.sample_states.push_back(state1(0.7));
    }
    CHECK(variation::pointwise_total_variation(m, constant, 0.0, 1.0) == 0.0);

    const RegulatedCurve ramp = ramp_curve(20, 0.0, 1.0);
    CHECK(variation::pointwise_total_variation(m, ramp, 0.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));

    // asymmetric rates: up at 2, down at 1
    models::DoubleWellParams p;
    p.alpha_plus = 2.0;
    p.alpha_minus = 1.0;
    p.default_load = false;
    p.load = LoadProfile::linear(0.0, 1.0);
    p.T = 1.0;
    const RisModel asym = models::double_well_model(p);
    RegulatedCurve updown;
    for (int i = 0; i <= 40; ++i) {
        const double t = i / 40.0;
        updown.sample_times.push_back(t);
        updown.sample_states.push_back(state1(t <= 0.5 ? 2.0 * t : 2.0 - 2.0 * t));
    }
    CHECK(variation::pointwise_total_variation(asym, updown, 0.0, 1.0) ==
          doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("augmented variation adds only the excess jump costs")
{
    const RisModel m = frozen_quadratic();

    const RegulatedCurve ramp = ramp_curve(20, 0.0, 1.0);
    CHECK(variation::augmented_total_variation(m, ramp, 0.0, 1.0) ==
          variation::pointwise_total_variation(m, ramp, 0.0, 1.0));

    // a jump whose cost equals d contributes nothing extra
    RegulatedCurve convex_jump = ramp_curve(20, 0.0, 1.0);
    variation::JumpRecord j0;
    j0.t = 0.5;
    j0.u_minus = state1(0.45);
    j0.u_mid = state1(0.5);
    j0.u_plus = state1(0.55);
    j0.cost_minus = m.dissipation(j0.u_minus, j0.u_mid);
    j0.cost_plus = m.dissipation(j0.u_mid, j0.u_plus);
    j0.costs_computed = true;
    convex_jump.jumps.push_back(j0);
    CHECK(variation::augmented_total_variation(m, convex_jump, 0.0, 1.0) ==
          doctest::Approx(variation::pointwise_total_variation(m, convex_jump, 0.0, 1.0)));

    // artificial frozen-time jump 3 -> 1 with cost 4 and d = 2: excess 2
    RegulatedCurve jumpy;
    jumpy.sample_times = {0.0, 0.5, 1.0};
    jumpy.sample_states = {state1(3.0), state1(3.0), state1(1.0)};
    variation::JumpRecord j1;
    j1.t = 1.0;
    j1.u_minus = state1(3.0);
    j1.u_mid = state1(1.0);
    j1.u_plus = state1(1.0);
    j1.cost_minus = 4.0;
    j1.cost_plus = 0.0;
    j1.costs_computed = true;
    jumpy.jumps.push_back(j1);
    const double var = variation::pointwise_total_variation(m, jumpy, 0.0, 1.0);
    CHECK(var == doctest::Approx(2.0));
    CHECK(variation::augmented_total_variation(m, jumpy, 0.0, 1.0) ==
          doctest::Approx(var + 2.0));
}

TEST_CASE("additivity of the augmented variation, including splits at jump times")
{
    const RisModel m = frozen_quadratic();

    RegulatedCurve constant;
    for (int i = 0; i <= 10; ++i) {
        constant.sample_times.push_back(i / 10.0);
        constant.sample_states.push_back(state1(0.2));
    }
    CHECK(variation::additivity_check(m, constant, 0.0, 0.4, 1.0));

    RegulatedCurve jumpy = ramp_curve(40, -1.0, 1.0);
    variation::JumpRecord j;
    j.t = 0.5;
    j.u_minus = state1(-0.05);
    j.u_mid = state1(0.0);
    j.u_plus = state1(0.05);
    j.cost_minus = 0.3;  // synthetic excess on both halves
    j.cost_plus = 0.4;
    j.costs_computed = true;
    jumpy.jumps.push_back(j);
    CHECK(variation::additivity_check(m, jumpy, 0.0, 0.3, 0.9));
    CHECK(variation::additivity_check(m, jumpy, 0.1, 0.5, 0.8));  // split exactly at the jump
}

TEST_CASE("limit curve of the convex quadratic has no jumps")
{
    const RisModel m = models::convex_quadratic_model({});
    const auto entries = scheme::refinement_study(m, state1(0.0), {50, 100, 200}, {});
    const RegulatedCurve curve = variation::extract_limit_curve(m, entries, {});
    CHECK(curve.jumps.empty());
    CHECK(curve.warnings.empty());
}

TEST_CASE("limit curve of the supercritical double well has exactly one jump")
{
    models::DoubleWellParams p;
    p.mu = 2.0;
    const RisModel m = models::double_well_model(p);
    const auto entries = scheme::refinement_study(m, state1(p.u0), {150, 300, 600}, {});
    const RegulatedCurve curve = variation::extract_limit_curve(m, entries, {});
    REQUIRE(curve.jumps.size() == 1);
    CHECK(std::abs(curve.jumps[0].u_minus[0] + 1.0 / std::sqrt(3.0)) <= 2e-2);
    CHECK(std::abs(curve.jumps[0].u_plus[0] - 2.0 / std::sqrt(3.0)) <= 2e-2);
}

TEST_CASE("energy balance of a stationary stable curve is exact")
{
    models::ConvexQuadraticParams cp;
    cp.load = LoadProfile::linear(0.3, 0.5);  // moving load, state stays stable
    RisModel m = models::convex_quadratic_model(cp);
    m.horizon = 1.0;
    const auto traj =
        scheme::solve_incremental(m, scheme::Partition::uniform(1.0, 50), state1(0.5), {});
    const RegulatedCurve curve = variation::curve_from_trajectory(m, traj, {});
    const variation::BalanceReport rep = variation::energy_balance_report(m, curve, {});
    CHECK(rep.max_residual <= 1e-10);
}

TEST_CASE("variation dominates the dissipation between any two times")
{
    models::DoubleWellParams p;
    p.mu = 2.0;
    const RisModel m = models::double_well_model(p);
    const auto traj = scheme::solve_incremental(
        m, scheme::Partition::uniform(m.horizon, 200), state1(p.u0), {});
    const RegulatedCurve curve = variation::curve_from_trajectory(m, traj, {});
    for (int i = 0; i < 20; ++i) {
        const double s = m.horizon * i / 20.0;
        const double t = s + m.horizon * (20 - i) / 40.0;
        const double var = variation::pointwise_total_variation(m, curve, s, t);
        CHECK(m.dissipation(curve.state_at(s), curve.state_at(t)) <= var + 1e-12);
        CHECK(variation::augmented_total_variation(m, curve, s, t) >= var - 1e-12);
    }
}

TEST_CASE("chain-rule direction of the signed balance defect on stable curves")
{
    // convex quadratic: the limit curve is stable at every time; the
    // discrete curve may undershoot by the dropped delta and R sums,
    // which vanish linearly with the mesh
    const RisModel m = models::convex_quadratic_model({});
    double prev_defect = -std::numeric_limits<double>::infinity();
    for (int N : {100, 200, 400}) {
        const auto traj =
            scheme::solve_incremental(m, scheme::Partition::uniform(2.0, N), state1(0.0), {});
        const RegulatedCurve curve = variation::curve_from_trajectory(m, traj, {});
        const variation::BalanceReport rep = variation::energy_balance_report(m, curve, {});
        const double mesh = 2.0 / N;
        CHECK(rep.min_signed_defect >= -2.0 * mesh);
        CHECK(rep.min_signed_defect >= prev_defect);  // tightens under refinement
        prev_defect = rep.min_signed_defect;
    }
}

TEST_CASE("missing jump costs are an error")
{
    const RisModel m = frozen_quadratic();
    RegulatedCurve c = ramp_curve(10, 0.0, 1.0);
    variation::JumpRecord j;
    j.t = 0.5;
    j.u_minus = state1(0.4);
    j.u_mid = state1(0.5);
    j.u_plus = state1(0.6);
    j.costs_computed = false;
    c.jumps.push_back(j);
    CHECK_THROWS_AS(variation::augmented_total_variation(m, c, 0.0, 1.0), EvaluationError);
}
