#include <doctest.h>

#include <cmath>
#include <random>

#include "veris/models.hpp"
#include "veris/scheme.hpp"

using namespace veris;
using models::DoubleWellParams;

TEST_CASE("double-well model values")
{
    DoubleWellParams p;
    p.mu = 2.0;
    p.default_load = false;
    p.load = LoadProfile::linear(0.0, 0.5);
    p.T = 1.0;
    const RisModel m = models::double_well_model(p);
    CHECK(m.energy(0.0, state1(0.0)) == doctest::Approx(0.25));
    CHECK(models::double_well_slope(-1.0 / std::sqrt(3.0)) ==
          doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-14));
    CHECK(m.power(0.7, state1(1.3)) == doctest::Approx(-0.5 * 1.3));
    CHECK(m.horizon == 1.0);
}

TEST_CASE("regime classification")
{
    DoubleWellParams p;
    p.mu = 2.0;
    CHECK(p.regime() == models::Regime::supercritical);
    p.mu = 1.0;  // mu alpha^2 = lambda: boundary counts as supercritical
    CHECK(p.regime() == models::Regime::supercritical);
    p.mu = 1.0 / 3.0;
    CHECK(p.regime() == models::Regime::subcritical);
    p.mu = 0.0;
    CHECK(p.regime() == models::Regime::energetic);
}

TEST_CASE("branch-following reference solution")
{
    DoubleWellParams p;
    p.mu = 2.0;
    const models::BranchState at0 = models::analytic_ve_solution_1d(p, 0.0);
    CHECK(at0.u == doctest::Approx(p.u0).epsilon(1e-10));
    CHECK(at0.u_pre == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(at0.u_post == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-10));

    const RisModel m = models::double_well_model(p);
    const double load_at_jump = -m.energy(at0.t_jump, state1(1.0));  // E(t,1) = W(1) - l(t)
    CHECK(load_at_jump - 1.0 ==
          doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-10));

    // on the branch the defining equation holds exactly
    for (double t : {0.2, 0.8, 1.5}) {
        const models::BranchState s = models::analytic_ve_solution_1d(p, t);
        CHECK_FALSE(s.jumped);
        CHECK(models::double_well_slope(s.u) ==
              doctest::Approx(-0.875 + t - 1.0).epsilon(1e-10));
    }
    const models::BranchState late = models::analytic_ve_solution_1d(p, at0.t_jump + 0.5);
    CHECK(late.jumped);
    CHECK(late.u > 1.0);

    DoubleWellParams sub = p;
    sub.mu = 0.2;
    CHECK_THROWS_AS(models::analytic_ve_solution_1d(sub, 0.0), WrongRegimeError);
}

TEST_CASE("modified equal-area rule at mu = 1/3")
{
    DoubleWellParams p;
    p.mu = 1.0 / 3.0;
    const double onset = -std::sqrt(2.0 / 3.0);
    const models::MaxwellJump mj = models::modified_maxwell_jump(p, onset);
    // odd symmetry: first landing mirrors the onset; chord slope a^2 - 1 = -mu
    CHECK(mj.u_plus_first == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-9));
    CHECK(mj.area_residual <= 1e-10);
    CHECK(mj.u_plus_final == doctest::Approx(1.1153).epsilon(1e-4));

    // independent oracle: polynomial antiderivative of the rule
    auto area = [&](double a, double v) {
        return models::double_well_potential(v) - models::double_well_potential(a) -
               models::double_well_slope(a) * (v - a) + 0.5 * p.mu * (v - a) * (v - a);
    };
    CHECK(std::abs(area(onset, mj.u_plus_first)) <= 1e-10);
    CHECK(models::double_well_slope(mj.u_plus_final) ==
          doctest::Approx(models::double_well_slope(onset)).epsilon(1e-10));

    DoubleWellParams super = p;
    super.mu = 2.0;
    CHECK_THROWS_AS(models::modified_maxwell_jump(super, onset), WrongRegimeError);
}

TEST_CASE("generic onset solver against the symmetry closed form")
{
    for (double mu : {0.1, 0.25, 1.0 / 3.0, 0.5, 0.6}) {
        DoubleWellParams p;
        p.mu = mu;
        const double onset = models::subcritical_onset(p);
        CHECK(onset == doctest::Approx(-std::sqrt(1.0 - mu)).epsilon(1e-6));
    }
    // towards mu = 0 the rule degenerates to the classical one with roots near -1
    DoubleWellParams tiny;
    tiny.mu = 1e-4;
    CHECK(models::subcritical_onset(tiny) ==
          doctest::Approx(-std::sqrt(1.0 - 1e-4)).epsilon(1e-4));
}

TEST_CASE("classical equal-area rule")
{
    DoubleWellParams p;
    p.mu = 0.0;
    const RisModel m = models::double_well_model(p);
    const double t_maxwell = m.horizon / 2.0;  // default load puts the jump mid-interval
    const auto [um, up] = models::energetic_maxwell_jump(p, t_maxwell);
    CHECK(um == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(up == doctest::Approx(1.0).epsilon(1e-6));

    // area residual at the returned pair (polynomial antiderivative oracle)
    const double level = models::double_well_slope(um);
    const double area = models::double_well_potential(up) - models::double_well_potential(um) -
                        level * (up - um);
    CHECK(std::abs(area) <= 1e-10);

    // convex-envelope cross-check: the envelope derivative u(u^2-1) for
    // |u| >= 1 and 0 between: at level 0 the flat piece spans exactly [-1, 1]
    auto envelope_slope = [](double u) {
        return std::abs(u) >= 1.0 ? u * (u * u - 1.0) : 0.0;
    };
    CHECK(envelope_slope(um) == doctest::Approx(0.0));
    CHECK(envelope_slope(up) == doctest::Approx(0.0));
    CHECK(envelope_slope(um - 1e-3) < 0.0);
    CHECK(envelope_slope(up + 1e-3) > 0.0);
}

TEST_CASE("convex quadratic: stable set equals the derivative band")
{
    const RisModel m = models::convex_quadratic_model({});
    stability::StabilityConfig cfg;
    const double t = 1.5;  // stable set [t - 1, t + 1]
    CHECK(stability::residual(m, t, state1(t - 1.0), cfg) <= cfg.tol_stable);
    CHECK(stability::residual(m, t, state1(t - 1.1), cfg) > cfg.tol_stable);

    int agree = 0;
    for (int i = 0; i < 100; ++i) {
        const double u = -1.5 + 6.0 * i / 99.0;
        const bool global = stability::residual(m, t, state1(u), cfg) <= cfg.tol_stable;
        const bool local = std::abs(u - t) <= 1.0 + 1e-9;
        if (global == local) ++agree;
    }
    CHECK(agree == 100);
}

TEST_CASE("marginal model: reduction and joint minimization agree")
{
    const auto [full, reduced] = models::marginal_model({});
    // marginal energy and its unique minimizer phi = z
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> span(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        const double z = span(rng), phi = span(rng), t = 0.5;
        CHECK(reduced.energy(t, state1(z)) <= full.energy(t, {phi, z}) + 1e-12);
        CHECK(full.energy(t, {z, z}) == doctest::Approx(reduced.energy(t, state1(z))));
    }

    // the 2D scheme reproduces the reduced z-component step by step
    scheme::SchemeConfig cfg;
    const int N = 40;
    const auto traj2 = scheme::solve_incremental(
        full, scheme::Partition::uniform(full.horizon, N), {0.0, 0.0}, cfg);
    const auto traj1 = scheme::solve_incremental(
        reduced, scheme::Partition::uniform(reduced.horizon, N), state1(0.0), cfg);
    REQUIRE(traj2.valid);
    REQUIRE(traj1.valid);
    for (int n = 0; n <= N; ++n) {
        CHECK(std::abs(traj2.states[static_cast<std::size_t>(n)][1] -
                       traj1.states[static_cast<std::size_t>(n)][0]) <= 1e-6);
        // the phi component tracks its marginal minimizer phi = z
        CHECK(std::abs(traj2.states[static_cast<std::size_t>(n)][0] -
                       traj2.states[static_cast<std::size_t>(n)][1]) <= 1e-6);
    }
}

TEST_CASE("discrete Allen-Cahn energy, gradient and identity")
{
    models::AllenCahnParams p;
    p.nodes = 8;
    p.load = LoadProfile::linear(0.0, 0.0);
    const RisModel m = models::allen_cahn_model(p);
    const double h = 1.0 / 9.0;
    CHECK(m.energy(0.0, StatePoint(8, 0.0)) == doctest::Approx(0.25 * 8 * h).epsilon(1e-14));

    // finite-difference oracle for the analytic gradient
    models::AllenCahnParams q = p;
    q.load = LoadProfile::linear(0.1, 0.7);
    const RisModel mq = models::allen_cahn_model(q);
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> span(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        StatePoint u(8);
        for (auto& c : u) c = span(rng);
        const std::vector<double> g = models::allen_cahn_energy_gradient(q, 0.4, u);
        for (int i = 0; i < 8; ++i) {
            StatePoint up = u, dn = u;
            up[static_cast<std::size_t>(i)] += 1e-6;
            dn[static_cast<std::size_t>(i)] -= 1e-6;
            const double fd = (mq.energy(0.4, up) - mq.energy(0.4, dn)) / 2e-6;
            CHECK(std::abs(g[static_cast<std::size_t>(i)] - fd) <= 1e-6);
        }
    }

    // ten-step run keeps the discrete identity
    models::AllenCahnParams r = p;
    r.load = LoadProfile::linear(0.0, 0.6);
    const RisModel mr = models::allen_cahn_model(r);
    scheme::SchemeConfig cfg;
    cfg.stability.minimize.multistart = 2;
    const auto traj = scheme::solve_incremental(
        mr, scheme::Partition::uniform(mr.horizon, 10), StatePoint(8, 0.0), cfg);
    REQUIRE(traj.valid);
    CHECK(scheme::check_discrete_energy_identity(mr, traj, cfg) <= 1e-5);
}

TEST_CASE("two-distance convexity estimates")
{
    const auto euclid = [](const StatePoint& x, const StatePoint& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
        return std::sqrt(s);
    };

    // exactly convex quadratic: alpha = a and no Lambda needed
    const RisModel cq = models::convex_quadratic_model({});
    const models::AlphaLambdaEstimate eq = models::check_alpha_lambda_convexity(cq, euclid, 500);
    CHECK(eq.alpha_hat >= 1.0);
    CHECK(eq.lambda_hat == 0.0);
    CHECK(eq.violations == 0);

    // double well: negative curvature must be absorbed by the Lambda term
    models::DoubleWellParams dp;
    dp.mu = 1.0;
    const RisModel dw = models::double_well_model(dp);
    const models::AlphaLambdaEstimate ed = models::check_alpha_lambda_convexity(dw, euclid, 500);
    CHECK(ed.alpha_hat > 0.0);
    CHECK(ed.violations == 0);

    // Allen-Cahn at N = 16: the gradient term dominates through the
    // discrete Poincare inequality
    models::AllenCahnParams ap;
    ap.nodes = 16;
    const RisModel ac = models::allen_cahn_model(ap);
    const auto dstar = [&](const StatePoint& x, const StatePoint& y) {
        return std::sqrt(2.0 * ac.viscous(x, y));
    };
    const models::AlphaLambdaEstimate ea = models::check_alpha_lambda_convexity(ac, dstar, 300);
    CHECK(ea.alpha_hat > 0.0);
    CHECK(ea.violations == 0);
}

TEST_CASE("second-distance BV recursion and sum bound")
{
    const RisModel cq = models::convex_quadratic_model({});  // mu = 1: delta = d*^2/2 for d* = |.|
    const auto dstar = [](const StatePoint& x, const StatePoint& y) {
        return std::abs(x[0] - y[0]);
    };
    const auto traj = scheme::solve_incremental(
        cq, scheme::Partition::uniform(2.0, 100), state1(0.0), {});

    // alpha from the convexity estimate (shaved for safety), L = |l'| / sqrt(mu)
    const models::AlphaLambdaEstimate est = models::check_alpha_lambda_convexity(cq, dstar, 500);
    const models::DstarBvReport rep =
        models::dstar_bv_bound_check(cq, dstar, traj, 0.9 * est.alpha_hat, est.lambda_hat, 1.0);
    CHECK(rep.recursion_ok);
    CHECK(rep.sum_ok);
    CHECK(rep.sum_slack >= 0.0);

    // stationary trajectory: all step terms vanish
    models::ConvexQuadraticParams sp;
    sp.load = LoadProfile::linear(0.3, 0.0);
    const RisModel stat = models::convex_quadratic_model(sp);
    const auto straj = scheme::solve_incremental(
        stat, scheme::Partition::uniform(2.0, 20), state1(0.5), {});
    const models::DstarBvReport srep = models::dstar_bv_bound_check(stat, dstar, straj, 1.0, 0.0, 0.0);
    CHECK(srep.recursion_ok);
    CHECK(srep.sum_ok);
}
