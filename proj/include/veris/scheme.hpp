#ifndef VERIS_SCHEME_HPP
#define VERIS_SCHEME_HPP

#include <cstdint>
#include <vector>

#include "veris/stability.hpp"

namespace veris::scheme {

/// Ordered partition 0 = t0 < t1 < ... < tN = T of the time interval.
struct Partition {
    std::vector<double> times;

    static Partition uniform(double T, int N);
    void validate() const;
    double T() const { return times.back(); }
    int steps() const { return static_cast<int>(times.size()) - 1; }
    double mesh() const;
};

struct StepRecord {
    double d_step = 0.0;          ///< d(U^{n-1}, U^n)
    double delta_step = 0.0;      ///< delta(U^{n-1}, U^n)
    double residual_prev = 0.0;   ///< R(t^n, U^{n-1})
    double energy = 0.0;          ///< E(t^n, U^n)
    double power_integral = 0.0;  ///< ∫_{t^{n-1}}^{t^n} P(s, U^{n-1}) ds
    double quad_error = 0.0;      ///< midpoint-rule error estimate (0 when exact)
};

struct DiscreteTrajectory {
    Partition partition;
    std::vector<StatePoint> states;  ///< U^0 ... U^N
    std::vector<StepRecord> steps;   ///< record n-1 describes step t^{n-1} -> t^n
    bool valid = true;
    int invalid_step = -1;  ///< first step whose minimizer hit the box boundary

    /// Left-continuous piecewise constant interpolant: value U^n on (t^{n-1}, t^n].
    const StatePoint& state_at(double t) const;

    double V_tau(int n) const;  ///< cumulative d through step n
    double W_tau(int n) const;  ///< cumulative d + delta + residual through step n
};

struct SchemeConfig {
    stability::StabilityConfig stability;
    std::uint64_t seed = 42;  ///< seeds the random test states of the diagnostics
};

/// The viscous incremental minimization scheme: each U^n is a global
/// minimizer of E(t^n,·) + D(U^{n-1},·) over the search box, selected
/// from the minimal set by the documented tie-break. A boundary
/// minimizer marks the run invalid (box too small) and stops it.
DiscreteTrajectory solve_incremental(const RisModel& model, const Partition& partition,
                                     const StatePoint& U0, const SchemeConfig& config);

struct StabilityViolation {
    int step = 0;
    StatePoint test_state;
    double margin = 0.0;  ///< how far the inequality failed
};

struct DiscreteStabilityReport {
    std::vector<StabilityViolation> violations;
    long long checks = 0;
    bool ok() const { return violations.empty(); }
};

/// Mixed-form discrete stability: for each step and each random test
/// state V, E(t^n,U^n) <= E(t^n,V) + d(U^n,V) + delta(U^{n-1},V) + tol.
DiscreteStabilityReport check_discrete_stability(const RisModel& model,
                                                 const DiscreteTrajectory& traj, int sample_count,
                                                 const SchemeConfig& config);

/// Max over steps of the discrete energy-balance defect
/// |E(t^n,U^n) + D(U^{n-1},U^n) + R(t^n,U^{n-1}) − E(t^{n-1},U^{n-1}) − ∫P|,
/// with R recomputed at a finer verification resolution.
double check_discrete_energy_identity(const RisModel& model, const DiscreteTrajectory& traj,
                                      const SchemeConfig& config);

struct AprioriReport {
    double F0 = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    bool envelope_ok = true;
    double envelope_min_slack = 0.0;  ///< min over n of ceiling − F(t^n,U^n)
    bool sum_ok = true;
    double sum_slack = 0.0;  ///< C2 − Σ (D + R)
};

AprioriReport check_apriori_bounds(const RisModel& model, const DiscreteTrajectory& traj,
                                   const SchemeConfig& config);

struct RefinementEntry {
    int n_steps = 0;
    double mesh = 0.0;
    DiscreteTrajectory trajectory;
    double balance_residual = 0.0;
};

/// Runs the scheme on a sequence of refining partitions and evaluates
/// the energy-balance residual of each run's reconstructed curve.
/// An invalid run aborts the study, reporting its index.
std::vector<RefinementEntry> refinement_study(const RisModel& model, const StatePoint& U0,
                                              const std::vector<int>& step_counts,
                                              const SchemeConfig& config, int threads = 1);

}  // namespace veris::scheme

#endif
