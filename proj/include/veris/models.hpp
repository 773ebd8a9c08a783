#ifndef VERIS_MODELS_HPP
#define VERIS_MODELS_HPP

#include <functional>
#include <vector>

#include "veris/core.hpp"
#include "veris/scheme.hpp"

namespace veris::models {

/// W(u) = 1/4 (1 − u²)², the standard double well; λ = −min W'' = 1.
double double_well_potential(double u);
double double_well_slope(double u);  ///< W'(u) = u³ − u

enum class Regime { supercritical, subcritical, energetic };

struct DoubleWellParams {
    double alpha_plus = 1.0;
    double alpha_minus = 1.0;
    double mu = 2.0;
    LoadProfile load;        ///< defaulted so u0 sits stably on the left branch
    bool default_load = true;
    double lambda = 1.0;
    double u0 = -1.5;
    double T = -1.0;  ///< horizon; negative means auto (jump mid-interval)
    double box_lo = -3.0;
    double box_hi = 3.0;

    Regime regime() const;
};

/// E(t,u) = W(u) − l(t)·u with one-sided dissipation and quadratic
/// viscosity. The default load l(t) = l0 + t starts the initial datum
/// exactly on the branch and places the jump mid-interval.
RisModel double_well_model(DoubleWellParams params);

struct BranchState {
    double u = 0.0;
    bool jumped = false;    ///< t is past the jump time
    double t_jump = 0.0;
    double u_pre = 0.0;     ///< u(t−) at the jump
    double u_post = 0.0;    ///< u(t+) at the jump
};

/// Branch-following reference solution in the supercritical regime
/// (mu * alpha_plus^2 >= lambda): W'(u(t)) = l(t) − alpha_plus on the
/// current increasing branch, with the jump triggered at the local
/// maximum of W'. Throws WrongRegimeError otherwise.
BranchState analytic_ve_solution_1d(const DoubleWellParams& params, double t);

struct MaxwellJump {
    double u_plus_first = 0.0;  ///< first landing of the optimal transition
    double u_plus_final = 0.0;  ///< accumulation point on the stable branch
    double area_residual = 0.0; ///< quadrature residual of the rule at the root
};

/// Modified equal-area rule for the subcritical regime
/// (0 < mu * alpha_plus^2 < lambda): the chord of slope −mu through
/// (u−, W'(u−)) meets the graph again at the first landing, and the
/// equal-area integral vanishes there. Generic quadrature/root-finding
/// path; the symmetric closed form lives in the tests.
MaxwellJump modified_maxwell_jump(const DoubleWellParams& params, double u_minus);

/// Onset of the subcritical jump: the pair (a, b(a)) at which the
/// equal-area residual first vanishes together with the chord-endpoint
/// condition. Returns a (the symmetric closed form is −sqrt(1 − mu)).
double subcritical_onset(const DoubleWellParams& params);

/// Classical equal-area rule for mu = 0: u− on the left branch at level
/// l(t) − alpha_plus, u+ > 1 with vanishing equal-area integral.
std::pair<double, double> energetic_maxwell_jump(const DoubleWellParams& params, double t);

struct ConvexQuadraticParams {
    double a = 1.0;  ///< E(t,u) = a/2 u² − l(t) u
    double alpha = 1.0;
    double mu = 1.0;
    LoadProfile load = LoadProfile::linear(0.0, 1.0);
    double T = 2.0;
    double box_lo = -6.0;
    double box_hi = 6.0;
};

RisModel convex_quadratic_model(ConvexQuadraticParams params);

struct MarginalModelParams {
    double alpha = 1.0;
    double mu = 1.0;
    LoadProfile load = LoadProfile::linear(0.0, 1.0);
    double T = 2.0;
    double box_lo = -6.0;
    double box_hi = 6.0;
};

/// Product-space model E(t,φ,z) = 1/2 (φ−z)² + 1/2 z² − l(t) z with a
/// dissipation ignoring φ, plus its marginal reduction
/// Ẽ(t,z) = min_φ E = 1/2 z² − l(t) z (minimizer φ = z).
std::pair<RisModel, RisModel> marginal_model(MarginalModelParams params);

struct AllenCahnParams {
    int nodes = 32;           ///< interior nodes; h = 1/(nodes+1)
    double mu = 1.0;
    double alpha = 1.0;       ///< L1 dissipation rate
    LoadProfile load = LoadProfile::linear(0.0, 1.0);
    std::vector<double> load_shape;  ///< per-node multiplier, default all ones
    double T = 1.0;
    double box_lo = -2.5;
    double box_hi = 2.5;
};

/// Finite-difference Allen-Cahn energy with homogeneous Dirichlet
/// boundary (ghost nodes pinned at zero), L1 dissipation h·Σ|u_i − v_i|
/// and viscosity mu/2 · h·Σ(u_i − v_i)².
RisModel allen_cahn_model(AllenCahnParams params);

/// Analytic gradient of the discrete Allen-Cahn energy, for the
/// finite-difference cross-checks.
std::vector<double> allen_cahn_energy_gradient(const AllenCahnParams& params, double t,
                                               const StatePoint& u);

using DstarMetric = std::function<double(const StatePoint&, const StatePoint&)>;

struct AlphaLambdaEstimate {
    double alpha_hat = 0.0;
    double lambda_hat = 0.0;
    int violations = 0;      ///< samples violating the final pair
    int samples = 0;
};

/// Samples the two-distance generalized convexity of E along segments
/// and grid-searches the largest alpha and smallest Lambda that hold
/// with margin >= −tol on all samples.
AlphaLambdaEstimate check_alpha_lambda_convexity(const RisModel& model, const DstarMetric& dstar,
                                                 int samples, std::uint64_t seed = 7,
                                                 double tol = 1e-9);

struct DstarBvReport {
    bool recursion_ok = true;
    double recursion_worst_violation = 0.0;  ///< max over n of lhs − rhs (<= 0 when ok)
    bool sum_ok = true;
    double sum_slack = 0.0;  ///< bound − Σ d*(U^n, U^{n+1})
    double gamma = 0.0;
};

/// Step recursion (2α+1)·d*²(U^n,U^{n+1}) <= d*²(U^{n−1},U^n)
/// + (2Λ d(U^n,U^{n+1}) + 2L τ^{n+1})·d*(U^n,U^{n+1}) and the discrete
/// Gronwall sum bound Σ d* <= (a0 + Σ b_n)/γ with γ = sqrt(2α+1) − 1.
/// Requires the trajectory's viscous correction to equal 1/2 d*².
DstarBvReport dstar_bv_bound_check(const RisModel& model, const DstarMetric& dstar,
                                   const scheme::DiscreteTrajectory& traj, double alpha,
                                   double Lambda, double L, double tol = 1e-9);

}  // namespace veris::models

#endif
