#ifndef VERIS_TRANSITIONS_HPP
#define VERIS_TRANSITIONS_HPP

#include <vector>

#include "veris/stability.hpp"

namespace veris::transitions {

enum class PointKind { stable, viscous };

/// A jump transition at frozen time: a finite sorted parameter set with
/// one state per parameter. Finite sets make every consecutive gap a
/// hole, so the gap-viscosity sum runs over consecutive pairs; sliding
/// (continuum) portions exist as refinement limits of such sets.
struct Transition {
    std::vector<double> params;
    std::vector<StatePoint> states;
    double time = 0.0;
    std::vector<PointKind> kinds;  ///< optional per-point tags

    int points() const { return static_cast<int>(states.size()); }
    void validate() const;
};

struct CostBreakdown {
    double var_part = 0.0;       ///< sum of consecutive d
    double gap_part = 0.0;       ///< sum of consecutive delta
    double residual_part = 0.0;  ///< sum of R over all points except the last
    double total() const { return var_part + gap_part + residual_part; }
};

struct TransitionConfig {
    stability::StabilityConfig stability;
    int max_iter = 200;            ///< viscous-transition iteration cap
    int lattice_points = 21;       ///< 1D short-path oracle lattice
    int max_path_points = 6;       ///< oracle path length cap (incl. endpoints)
    int max_refine_points = 2048;  ///< sliding-segment refinement cap (1D)
    int max_refine_points_nd = 64;
    double sliding_gap_tol = 1e-4;
};

CostBreakdown transition_cost(const RisModel& model, const Transition& transition,
                              const TransitionConfig& config);

/// Trc(E) = Trc(E ∩ [s0, s_split]) + Trc(E ∩ [s_split, s_K]) within
/// 1e-12 relative: finite-sum regrouping, checked literally.
bool cost_additivity_check(const RisModel& model, const Transition& transition, int split_index,
                           const TransitionConfig& config);

struct ViscousTransitionResult {
    Transition transition;
    std::vector<double> residuals;  ///< R(t, theta(n)) per point
    bool converged = false;
    StatePoint limit;
    double tail_estimate = 0.0;  ///< geometric bound on the truncated tail cost
};

/// Iterates the minimal-set map from u_start at frozen time t until the
/// residual and the step size both fall below tolerance (or max_iter);
/// the witness construction behind viscous jumps.
ViscousTransitionResult construct_viscous_transition(const RisModel& model, double t,
                                                     const StatePoint& u_start, int max_iter,
                                                     const TransitionConfig& config);

struct JumpCostResult {
    double cost = 0.0;
    Transition witness;
    CostBreakdown breakdown;
};

/// Certified upper bound for the jump dissipation cost c(t,u−,u+):
/// minimum of Trc over the candidate family (direct pair, iterated-M
/// prefixes bridged to u+, refined segments, and a short-path lattice
/// oracle in 1D). Asserts cost >= d(u−,u+) and cost >= E(t,u−) − E(t,u+).
JumpCostResult jump_cost(const RisModel& model, double t, const StatePoint& u_minus,
                         const StatePoint& u_plus, const TransitionConfig& config);

struct JumpConditionReport {
    double res_left = 0.0;   ///< |E(t,u−) − E(t,u) − c(t,u−,u)|
    double res_right = 0.0;  ///< |E(t,u) − E(t,u+) − c(t,u,u+)|
    double res_total = 0.0;  ///< |E(t,u−) − E(t,u+) − c(t,u−,u+)|
};

JumpConditionReport verify_jump_conditions(const RisModel& model, double t,
                                           const StatePoint& u_minus, const StatePoint& u_mid,
                                           const StatePoint& u_plus,
                                           const TransitionConfig& config);

/// E(t, theta(last)) + Trc >= E(t, theta(first)) − tol.
bool energy_drop_bound_check(const RisModel& model, const Transition& transition,
                             const TransitionConfig& config);

/// Reparametrizes by s -> (s−s0)/(sK−s0) + cumulative (d+delta); the new
/// parameters span [0, C+1] and every cost part is unchanged.
Transition rescale_transition(const RisModel& model, const Transition& transition);

enum class SegmentKind { sliding, pure_jump };

struct Segment {
    int first = 0;  ///< first point index
    int last = 0;   ///< last point index
    SegmentKind kind = SegmentKind::sliding;
};

/// Splits the index range into maximal runs of sliding steps (stable
/// points, small d) and pure-jump steps (unstable points or large d).
/// step_threshold <= 0 means 10x the median nonzero d-step.
std::vector<Segment> decompose_transition(const RisModel& model, const Transition& transition,
                                          const TransitionConfig& config,
                                          double step_threshold = 0.0);

}  // namespace veris::transitions

#endif
