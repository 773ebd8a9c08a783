#include "veris/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace veris::variation {

const StatePoint& RegulatedCurve::state_at(double t) const
{
    if (t <= sample_times.front()) return sample_states.front();
    const auto it = std::lower_bound(sample_times.begin(), sample_times.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - sample_times.begin());
    return sample_states[std::min(idx, sample_states.size() - 1)];
}

double pointwise_total_variation(const RisModel& model, const RegulatedCurve& curve, double a,
                                 double b)
{
    if (!(a <= b)) throw ConfigError("pointwise_total_variation: need a <= b");
    double total = 0.0;
    const StatePoint* prev = &curve.state_at(a);
    const auto begin = std::upper_bound(curve.sample_times.begin(), curve.sample_times.end(), a);
    for (auto it = begin; it != curve.sample_times.end() && *it < b; ++it) {
        const std::size_t j = static_cast<std::size_t>(it - curve.sample_times.begin());
        const StatePoint& cur = curve.sample_states[j];
        total += model.dissipation(*prev, cur);
        prev = &cur;
    }
    total += model.dissipation(*prev, curve.state_at(b));
    return total;
}

namespace {

double excess_minus(const RisModel& model, const JumpRecord& j)
{
    return j.cost_minus - model.dissipation(j.u_minus, j.u_mid);
}

double excess_plus(const RisModel& model, const JumpRecord& j)
{
    return j.cost_plus - model.dissipation(j.u_mid, j.u_plus);
}

}  // namespace

double augmented_total_variation(const RisModel& model, const RegulatedCurve& curve, double a,
                                 double b)
{
    if (a == b) return 0.0;  // a point carries neither variation nor jump excess
    double total = pointwise_total_variation(model, curve, a, b);
    for (const JumpRecord& j : curve.jumps) {
        if (j.t < a || j.t > b) continue;
        if (!j.costs_computed)
            throw EvaluationError("augmented_total_variation: missing jump cost at t = " +
                                  std::to_string(j.t));
        if (j.t > a && j.t < b) {
            total += excess_minus(model, j) + excess_plus(model, j);
        } else if (j.t == a) {
            total += excess_plus(model, j);
        } else {  // j.t == b
            total += excess_minus(model, j);
        }
    }
    return total;
}

bool additivity_check(const RisModel& model, const RegulatedCurve& curve, double a, double b,
                      double c)
{
    if (!(a <= b && b <= c)) throw ConfigError("additivity_check: need a <= b <= c");
    const double left = augmented_total_variation(model, curve, a, b);
    const double right = augmented_total_variation(model, curve, b, c);
    const double whole = augmented_total_variation(model, curve, a, c);
    const double scale = std::max({1.0, std::abs(whole), std::abs(left + right)});
    return std::abs(whole - (left + right)) <= 1e-10 * scale;
}

namespace {

struct StepCluster {
    int first = 0;  ///< first flagged step index (step n is node n-1 -> node n)
    int last = 0;
    int biggest = 0;
    double biggest_step = 0.0;
};

double step_threshold(const scheme::DiscreteTrajectory& traj, const VariationConfig& config)
{
    if (config.jump_threshold_abs > 0.0) return config.jump_threshold_abs;
    std::vector<double> nz;
    for (const auto& s : traj.steps)
        if (s.d_step > 0.0) nz.push_back(s.d_step);
    if (nz.empty()) return std::numeric_limits<double>::infinity();
    std::sort(nz.begin(), nz.end());
    return config.jump_threshold_factor * nz[nz.size() / 2];
}

std::vector<StepCluster> flag_clusters(const scheme::DiscreteTrajectory& traj, double threshold)
{
    std::vector<StepCluster> clusters;
    const int N = static_cast<int>(traj.steps.size());
    int n = 1;
    while (n <= N) {
        if (traj.steps[static_cast<std::size_t>(n - 1)].d_step > threshold) {
            StepCluster c{n, n, n, traj.steps[static_cast<std::size_t>(n - 1)].d_step};
            int m = n + 1;
            while (m <= N && traj.steps[static_cast<std::size_t>(m - 1)].d_step > threshold) {
                if (traj.steps[static_cast<std::size_t>(m - 1)].d_step > c.biggest_step) {
                    c.biggest = m;
                    c.biggest_step = traj.steps[static_cast<std::size_t>(m - 1)].d_step;
                }
                c.last = m;
                ++m;
            }
            clusters.push_back(c);
            n = m;
        } else {
            ++n;
        }
    }
    return clusters;
}

// Frozen-time relaxation from a fixed pre-jump anchor: iterating the
// minimal-set map at frozen t lands on the continuation branch before
// the jump time and on the far basin after it; the threshold certifies
// the jump time and both limit values independently of the scheme's
// O(mesh log mesh) traversal lag.
transitions::ViscousTransitionResult frozen_relaxation(const RisModel& model, double t,
                                                       const StatePoint& anchor, int max_iter,
                                                       const VariationConfig& config)
{
    return transitions::construct_viscous_transition(model, t, anchor, max_iter,
                                                     config.transitions);
}

// Certify (t*, u(t-), u(t+)) by bisecting the escape threshold of the
// frozen-time relaxation, then replace the lagged samples around the
// jump by their relaxation limits. The relaxation slows down near the
// marginal threshold, so non-converged runs classify as escaping (the
// ambiguity zone shrinks quadratically in the iteration cap) and the
// endpoint values are taken at offsets clear of the zone, with a
// two-point extrapolation absorbing the square-root fold bias.
// Mutates the curve window; returns false when the bracket does not
// classify (the record then keeps its sample reads).
bool refine_jump(const RisModel& model, const scheme::DiscreteTrajectory& traj,
                 const StepCluster& c, const VariationConfig& config, JumpRecord& j,
                 std::vector<StatePoint>& samples)
{
    const int anchor_idx = std::max(0, c.first - 6);
    const StatePoint anchor = traj.states[static_cast<std::size_t>(anchor_idx)];
    const double jump_scale =
        model.dissipation(traj.states[static_cast<std::size_t>(c.first - 1)],
                          traj.states[static_cast<std::size_t>(c.last)]);
    if (!(jump_scale > 0.0)) return false;

    auto escaped = [&](const transitions::ViscousTransitionResult& r) {
        if (!r.converged) return true;
        return model.dissipation(anchor, r.limit) + model.dissipation(r.limit, anchor) >
               0.5 * jump_scale;
    };
    const int classify_iters = 800;

    double t_lo = traj.partition.times[static_cast<std::size_t>(anchor_idx)];
    double t_hi = traj.partition.times[static_cast<std::size_t>(c.last)];
    if (escaped(frozen_relaxation(model, t_lo, anchor, classify_iters, config))) return false;
    if (!escaped(frozen_relaxation(model, t_hi, anchor, classify_iters, config))) return false;

    for (int it = 0; it < 30 && t_hi - t_lo > 1e-5 * (1.0 + model.horizon); ++it) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (escaped(frozen_relaxation(model, mid, anchor, classify_iters, config)))
            t_hi = mid;
        else
            t_lo = mid;
    }
    const double t_star = 0.5 * (t_lo + t_hi);

    // endpoint values at offsets clear of the slow zone
    const double off = 2e-3 * model.horizon;
    const int deep_iters = 3000;
    const auto lm = frozen_relaxation(model, t_star - off, anchor, deep_iters, config);
    const auto lm4 = frozen_relaxation(model, t_star - 0.25 * off, anchor, deep_iters, config);
    const auto rp = frozen_relaxation(model, t_star + off, anchor, deep_iters, config);
    const auto rp4 = frozen_relaxation(model, t_star + 0.25 * off, anchor, deep_iters, config);
    if (!lm.converged || !lm4.converged || !rp.converged || !rp4.converged) return false;

    auto extrapolate = [](const StatePoint& far, const StatePoint& near) {
        StatePoint out(near.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * near[i] - far[i];
        return out;
    };

    j.refined = true;
    j.t_limit = t_star;
    j.u_minus_limit = extrapolate(lm.limit, lm4.limit);
    j.u_plus_limit = extrapolate(rp.limit, rp4.limit);

    // Snap the lagged window: walk out from the first node past the
    // certified time until the samples agree with the frozen limits.
    const auto& times = traj.partition.times;
    const auto it = std::upper_bound(times.begin(), times.end(), t_star);
    const int n_hat = static_cast<int>(it - times.begin());
    const double snap_tol = 1e-3 * (1.0 + jump_scale);
    const int cap = 80;
    for (int n = n_hat - 1, k = 0; n >= std::max(1, anchor_idx) && k < cap; --n, ++k) {
        const auto r = frozen_relaxation(model, times[static_cast<std::size_t>(n)], anchor,
                                         classify_iters, config);
        // nodes inside the slow zone take the certified limit
        const StatePoint& target = r.converged ? r.limit : j.u_minus_limit;
        if (sup_distance(target, samples[static_cast<std::size_t>(n)]) <= snap_tol) break;
        samples[static_cast<std::size_t>(n)] = target;
    }
    for (int n = n_hat, k = 0; n < static_cast<int>(samples.size()) && k < cap; ++n, ++k) {
        const auto r = frozen_relaxation(model, times[static_cast<std::size_t>(n)], anchor,
                                         classify_iters, config);
        const StatePoint& target = r.converged ? r.limit : j.u_plus_limit;
        if (sup_distance(target, samples[static_cast<std::size_t>(n)]) <= snap_tol) break;
        samples[static_cast<std::size_t>(n)] = target;
    }

    // Collapsed record: left-continuous value at the jump is u(t-).
    j.t = t_star;
    j.u_minus = j.u_minus_limit;
    j.u_mid = j.u_minus_limit;
    j.u_plus = j.u_plus_limit;
    return true;
}

JumpRecord make_record(const RisModel& model, const scheme::DiscreteTrajectory& traj,
                       const StepCluster& c, const VariationConfig& config,
                       std::vector<StatePoint>& samples)
{
    JumpRecord j;
    j.t = traj.partition.times[static_cast<std::size_t>(c.biggest)];
    j.u_minus = traj.states[static_cast<std::size_t>(c.first - 1)];
    j.u_mid = traj.states[static_cast<std::size_t>(c.first)];
    j.u_plus = traj.states[static_cast<std::size_t>(c.last)];
    j.t_limit = j.t;
    j.u_minus_limit = j.u_minus;
    j.u_plus_limit = j.u_plus;
    refine_jump(model, traj, c, config, j, samples);

    const transitions::JumpCostResult left =
        transitions::jump_cost(model, j.t, j.u_minus, j.u_mid, config.transitions);
    const transitions::JumpCostResult right =
        transitions::jump_cost(model, j.t, j.u_mid, j.u_plus, config.transitions);
    j.cost_minus = left.cost;
    j.breakdown_minus = left.breakdown;
    j.cost_plus = right.cost;
    j.breakdown_plus = right.breakdown;
    j.costs_computed = true;
    return j;
}

RegulatedCurve curve_skeleton(const scheme::DiscreteTrajectory& traj)
{
    RegulatedCurve curve;
    curve.sample_times = traj.partition.times;
    curve.sample_states = traj.states;
    return curve;
}

}  // namespace

RegulatedCurve curve_from_trajectory(const RisModel& model,
                                     const scheme::DiscreteTrajectory& traj,
                                     const VariationConfig& config)
{
    if (!traj.valid) throw ConfigError("curve_from_trajectory: invalid trajectory");
    RegulatedCurve curve = curve_skeleton(traj);
    const double threshold = step_threshold(traj, config);
    for (const StepCluster& c : flag_clusters(traj, threshold))
        curve.jumps.push_back(make_record(model, traj, c, config, curve.sample_states));
    return curve;
}

RegulatedCurve extract_limit_curve(const RisModel& model,
                                   const std::vector<scheme::RefinementEntry>& entries,
                                   const VariationConfig& config)
{
    if (entries.size() < 3)
        throw ConfigError("extract_limit_curve: need at least three refinement levels");
    const scheme::DiscreteTrajectory& fine = entries.back().trajectory;
    const scheme::DiscreteTrajectory& coarse = entries[entries.size() - 2].trajectory;

    RegulatedCurve curve = curve_skeleton(fine);
    const double threshold = step_threshold(fine, config);

    for (const StepCluster& c : flag_clusters(fine, threshold)) {
        const double tj = fine.partition.times[static_cast<std::size_t>(c.biggest)];
        // Persistence: the traversed d of the cluster must reappear
        // (within a factor 2) near the same time in the second-finest
        // run, else it is steep sliding or an unresolved merge. Cluster
        // totals are compared since single steps shrink under refinement.
        double cluster_total = 0.0;
        for (int n = c.first; n <= c.last; ++n)
            cluster_total += fine.steps[static_cast<std::size_t>(n - 1)].d_step;
        const double t_lo = fine.partition.times[static_cast<std::size_t>(c.first - 1)];
        const double t_hi = fine.partition.times[static_cast<std::size_t>(c.last)];
        // the apparent jump time drifts by several coarse steps between
        // refinements, so the matching window is deliberately generous
        const double window = 20.0 * coarse.partition.mesh() + fine.partition.mesh();
        double matched = 0.0;
        for (std::size_t m = 1; m < coarse.states.size(); ++m) {
            if (coarse.partition.times[m] >= t_lo - window &&
                coarse.partition.times[m] <= t_hi + window)
                matched += coarse.steps[m - 1].d_step;
        }
        if (matched < 0.5 * cluster_total || matched > 2.0 * cluster_total) {
            curve.warnings.push_back("unresolved step at t = " + std::to_string(tj) +
                                     " (no persistent match across meshes)");
            continue;
        }
        curve.jumps.push_back(make_record(model, fine, c, config, curve.sample_states));
    }
    return curve;
}

BalanceReport energy_balance_report(const RisModel& model, const RegulatedCurve& curve,
                                    const VariationConfig& config)
{
    const double t0 = curve.sample_times.front();
    const double T = curve.sample_times.back();

    std::vector<double> checkpoints;
    const int C = std::max(2, config.checkpoints);
    for (int k = 0; k < C; ++k)
        checkpoints.push_back(t0 + (T - t0) * static_cast<double>(k) / (C - 1));
    double mesh = 0.0;
    for (std::size_t j = 1; j < curve.sample_times.size(); ++j)
        mesh = std::max(mesh, curve.sample_times[j] - curve.sample_times[j - 1]);
    for (const JumpRecord& j : curve.jumps) {
        checkpoints.push_back(std::max(t0, j.t - mesh));
        checkpoints.push_back(std::min(T, j.t + mesh));
    }
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

    // Cumulative power integral up to each sample time; piecewise
    // constant state makes each slice exact (or midpoint-approximated).
    std::vector<double> cum(curve.sample_times.size(), 0.0);
    for (std::size_t j = 1; j < curve.sample_times.size(); ++j) {
        const double a = curve.sample_times[j - 1];
        const double b = curve.sample_times[j];
        const StatePoint& x = curve.sample_states[j];
        double slice;
        if (model.power_integral) {
            slice = model.power_integral(a, b, x);
        } else {
            slice = (b - a) * model.power(0.5 * (a + b), x);
        }
        cum[j] = cum[j - 1] + slice;
    }
    auto power_to = [&](double t) {
        const auto it = std::upper_bound(curve.sample_times.begin(), curve.sample_times.end(), t);
        std::size_t j = static_cast<std::size_t>(it - curve.sample_times.begin());
        if (j == 0) return 0.0;
        if (j >= curve.sample_times.size()) return cum.back();
        const double a = curve.sample_times[j - 1];
        const StatePoint& x = curve.sample_states[j];
        double partial;
        if (model.power_integral) {
            partial = model.power_integral(a, t, x);
        } else {
            partial = (t - a) * model.power(0.5 * (a + t), x);
        }
        return cum[j - 1] + partial;
    };

    BalanceReport report;
    report.min_signed_defect = std::numeric_limits<double>::infinity();
    const double E0 = model.energy(t0, curve.sample_states.front());
    for (double t : checkpoints) {
        const double lhs =
            model.energy(t, curve.state_at(t)) + augmented_total_variation(model, curve, t0, t);
        const double rhs = E0 + power_to(t);
        BalanceCheckpoint cp;
        cp.t = t;
        cp.signed_defect = lhs - rhs;
        cp.residual = std::abs(cp.signed_defect);
        report.checkpoints.push_back(cp);
        report.max_residual = std::max(report.max_residual, cp.residual);
        report.min_signed_defect = std::min(report.min_signed_defect, cp.signed_defect);
    }
    return report;
}

}  // namespace veris::variation
