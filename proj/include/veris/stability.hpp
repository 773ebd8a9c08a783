#ifndef VERIS_STABILITY_HPP
#define VERIS_STABILITY_HPP

#include <vector>

#include "veris/core.hpp"
#include "veris/optim.hpp"

namespace veris::stability {

struct StabilityConfig {
    optim::MinimizeConfig minimize;
    double tol_stable = 1e-7;  ///< residual threshold for calling a point stable
};

/// Everything the regularization computes at one (t,x): the value
/// Y(t,x) = min_y E(t,y) + D(x,y), its minimal set, and the residual
/// R(t,x) = E(t,x) − Y(t,x) (clamped to [0,∞); raw value kept for
/// debugging solver slack).
struct StabilityReport {
    double yosida = 0.0;
    double residual = 0.0;
    double residual_raw = 0.0;
    std::vector<StatePoint> minimal_set;
    bool stable = false;
    bool on_boundary = false;  ///< minimizer pinned to the search box: box too small
};

StabilityReport stability_report(const RisModel& model, double t, const StatePoint& x,
                                 const StabilityConfig& config);

/// Y(t,x) together with the minimal set; the argmin of the D-regularized
/// energy over the search box.
std::pair<double, std::vector<StatePoint>> moreau_yosida(const RisModel& model, double t,
                                                         const StatePoint& x,
                                                         const StabilityConfig& config);

/// Residual stability function, zero exactly on the D-stable set (up to
/// the solver tolerance).
double residual(const RisModel& model, double t, const StatePoint& x,
                const StabilityConfig& config);

/// Quasi-stability with slack Q: residual(t,x) <= Q + tol_stable.
bool is_quasi_stable(const RisModel& model, double t, const StatePoint& x, double Q,
                     const StabilityConfig& config);

/// Local derivative test for 1D one-sided costs: −α− ≤ ∂ₓE(t,x) ≤ α+
/// within a finite-difference tolerance. Cross-check of global stability
/// when the viscous coefficient dominates the energy's concavity.
bool local_stability_check_1d(const RisModel& model, double t, const StatePoint& x,
                              const StabilityConfig& config);

/// The documented deterministic selection from a minimal set: smallest
/// d(from,·), ties broken lexicographically.
const StatePoint& select_from_minimal_set(const RisModel& model, const StatePoint& from,
                                          const std::vector<StatePoint>& candidates);

}  // namespace veris::stability

#endif
