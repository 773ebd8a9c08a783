#ifndef VERIS_VARIATION_HPP
#define VERIS_VARIATION_HPP

#include <string>
#include <vector>

#include "veris/scheme.hpp"
#include "veris/transitions.hpp"

namespace veris::variation {

struct JumpRecord {
    double t = 0.0;
    StatePoint u_minus;
    StatePoint u_mid;
    StatePoint u_plus;
    double cost_minus = 0.0;  ///< c(t, u−, u)
    double cost_plus = 0.0;   ///< c(t, u, u+)
    transitions::CostBreakdown breakdown_minus;
    transitions::CostBreakdown breakdown_plus;
    bool costs_computed = false;

    // Fold refinement (1D): the sample-adjacent reads lag the true jump
    // by O(mesh log mesh) when the branch folds; a quadratic apex fit of
    // the pre-jump samples plus a frozen-time witness removes the bias.
    bool refined = false;
    double t_limit = 0.0;
    StatePoint u_minus_limit;
    StatePoint u_plus_limit;
};

/// A BV curve reconstructed from a discrete run: left-continuous
/// piecewise constant between samples, with explicit jump records.
struct RegulatedCurve {
    std::vector<double> sample_times;
    std::vector<StatePoint> sample_states;
    std::vector<JumpRecord> jumps;
    std::vector<std::string> warnings;

    const StatePoint& state_at(double t) const;
};

struct VariationConfig {
    transitions::TransitionConfig transitions;
    double jump_threshold_factor = 10.0;  ///< multiple of the median nonzero step
    double jump_threshold_abs = 0.0;      ///< absolute override when > 0
    int checkpoints = 17;
};

/// Pointwise total variation of the curve over [a,b] w.r.t. d; exact on
/// the sample grid for piecewise constant curves (jump contributions
/// are the sample steps themselves).
double pointwise_total_variation(const RisModel& model, const RegulatedCurve& curve, double a,
                                 double b);

/// Var(u,[a,b]) plus the excess jump costs; endpoint jumps contribute
/// only their inner half, interior jumps both halves.
double augmented_total_variation(const RisModel& model, const RegulatedCurve& curve, double a,
                                 double b);

/// Var_{d,c}(u,[a,b]) + Var_{d,c}(u,[b,c]) == Var_{d,c}(u,[a,c]) within 1e-10.
bool additivity_check(const RisModel& model, const RegulatedCurve& curve, double a, double b,
                      double c);

/// Curve of a single trajectory: jump detection by the d-step threshold
/// alone (no cross-mesh persistence available), jump costs computed.
RegulatedCurve curve_from_trajectory(const RisModel& model,
                                     const scheme::DiscreteTrajectory& traj,
                                     const VariationConfig& config);

/// Curve of the finest trajectory of a refinement study; a flagged step
/// must persist (within a factor 2) in the second-finest run, otherwise
/// it is dropped with an "unresolved" warning.
RegulatedCurve extract_limit_curve(const RisModel& model,
                                   const std::vector<scheme::RefinementEntry>& entries,
                                   const VariationConfig& config);

struct BalanceCheckpoint {
    double t = 0.0;
    double residual = 0.0;       ///< |E + Var_{d,c} − E0 − ∫P|
    double signed_defect = 0.0;  ///< E + Var_{d,c} − E0 − ∫P
};

struct BalanceReport {
    double max_residual = 0.0;
    double min_signed_defect = 0.0;
    std::vector<BalanceCheckpoint> checkpoints;
};

/// Checks the augmented energy balance at a grid of checkpoints plus
/// all jump times ± mesh. The signed defect tracks the chain-rule
/// direction (>= 0 up to tolerance along stable curves).
BalanceReport energy_balance_report(const RisModel& model, const RegulatedCurve& curve,
                                    const VariationConfig& config);

}  // namespace veris::variation

#endif
