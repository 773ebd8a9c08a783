#include "veris/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace veris::transitions {

void Transition::validate() const
{
    if (params.size() != states.size())
        throw ConfigError("Transition: params/states size mismatch");
    for (std::size_t i = 1; i < params.size(); ++i) {
        if (!(params[i] > params[i - 1]))
            throw ConfigError("Transition: params must strictly increase");
    }
    if (!kinds.empty() && kinds.size() != states.size())
        throw ConfigError("Transition: kinds size mismatch");
}

CostBreakdown transition_cost(const RisModel& model, const Transition& transition,
                              const TransitionConfig& config)
{
    transition.validate();
    CostBreakdown bk;
    const int K = transition.points();
    if (K <= 1) return bk;
    for (int j = 1; j < K; ++j) {
        bk.var_part += model.dissipation(transition.states[static_cast<std::size_t>(j - 1)],
                                         transition.states[static_cast<std::size_t>(j)]);
        bk.gap_part += model.viscous(transition.states[static_cast<std::size_t>(j - 1)],
                                     transition.states[static_cast<std::size_t>(j)]);
    }
    for (int j = 0; j + 1 < K; ++j) {
        bk.residual_part += stability::residual(model, transition.time,
                                                transition.states[static_cast<std::size_t>(j)],
                                                config.stability);
    }
    return bk;
}

namespace {

Transition slice(const Transition& t, int first, int last)
{
    Transition s;
    s.time = t.time;
    s.params.assign(t.params.begin() + first, t.params.begin() + last + 1);
    s.states.assign(t.states.begin() + first, t.states.begin() + last + 1);
    return s;
}

Transition from_states(double t, std::vector<StatePoint> states)
{
    Transition tr;
    tr.time = t;
    tr.states = std::move(states);
    tr.params.resize(tr.states.size());
    for (std::size_t i = 0; i < tr.params.size(); ++i) tr.params[i] = static_cast<double>(i);
    return tr;
}

}  // namespace

bool cost_additivity_check(const RisModel& model, const Transition& transition, int split_index,
                           const TransitionConfig& config)
{
    transition.validate();
    const int K = transition.points() - 1;
    if (split_index <= 0 || split_index >= K)
        throw ConfigError("cost_additivity_check: split must be interior");
    const double whole = transition_cost(model, transition, config).total();
    const double left = transition_cost(model, slice(transition, 0, split_index), config).total();
    const double right =
        transition_cost(model, slice(transition, split_index, K), config).total();
    const double scale = std::max({1.0, std::abs(whole), std::abs(left + right)});
    return std::abs(whole - (left + right)) <= 1e-12 * scale;
}

ViscousTransitionResult construct_viscous_transition(const RisModel& model, double t,
                                                     const StatePoint& u_start, int max_iter,
                                                     const TransitionConfig& config)
{
    if (!model.search_box.contains(u_start))
        throw ConfigError("construct_viscous_transition: start outside the search box");

    ViscousTransitionResult res;
    std::vector<StatePoint> states{u_start};
    std::vector<double> residuals;
    double last_step = 0.0;
    bool have_step = false;

    for (int iter = 0; iter <= max_iter; ++iter) {
        const stability::StabilityReport rep =
            stability::stability_report(model, t, states.back(), config.stability);
        residuals.push_back(rep.residual);
        if (rep.stable && (!have_step || last_step <= config.stability.minimize.tol_x)) {
            res.converged = true;
            break;
        }
        if (iter == max_iter) break;
        const StatePoint next =
            stability::select_from_minimal_set(model, states.back(), rep.minimal_set);
        const double step = model.dissipation(states.back(), next);
        if (rep.stable && step <= config.stability.minimize.tol_x) {
            res.converged = true;
            break;
        }
        if (sup_distance(next, states.back()) == 0.0) {
            res.converged = rep.stable;
            break;
        }
        states.push_back(next);
        last_step = step;
        have_step = true;
    }
    while (residuals.size() < states.size()) residuals.push_back(0.0);

    // Geometric tail bound from the contraction observed over the last steps.
    if (states.size() >= 3) {
        const std::size_t k = states.size() - 1;
        const double s1 = total_dissipation(model, states[k - 1], states[k]);
        const double s0 = total_dissipation(model, states[k - 2], states[k - 1]);
        double q = (s0 > 0.0) ? s1 / s0 : 0.0;
        q = std::clamp(q, 0.0, 0.99);
        res.tail_estimate = s1 * q / (1.0 - q);
    }

    res.transition = from_states(t, std::move(states));
    res.transition.kinds.resize(res.transition.states.size());
    for (std::size_t i = 0; i < residuals.size(); ++i)
        res.transition.kinds[i] =
            residuals[i] > config.stability.tol_stable ? PointKind::viscous : PointKind::stable;
    res.residuals = std::move(residuals);
    res.limit = res.transition.states.back();
    return res;
}

namespace {

struct Candidate {
    std::vector<StatePoint> states;
    double total = std::numeric_limits<double>::infinity();
};

void consider(Candidate& best, std::vector<StatePoint> states, double total)
{
    if (total < best.total) {
        best.total = total;
        best.states = std::move(states);
    }
}

}  // namespace

JumpCostResult jump_cost(const RisModel& model, double t, const StatePoint& u_minus,
                         const StatePoint& u_plus, const TransitionConfig& config)
{
    JumpCostResult out;
    if (sup_distance(u_minus, u_plus) == 0.0) {
        out.witness = from_states(t, {u_minus});
        out.cost = 0.0;
        return out;
    }

    const double R_minus = stability::residual(model, t, u_minus, config.stability);
    Candidate best;

    // Direct two-point transition.
    consider(best, {u_minus, u_plus},
             model.dissipation(u_minus, u_plus) + model.viscous(u_minus, u_plus) + R_minus);

    // Iterated-M prefixes bridged to u_plus by a final direct segment.
    // A marginally stable start cannot leave under the tie-break, so the
    // same construction is retried from small kicks toward u_plus; the
    // kicked witness keeps u_minus as its first point.
    auto viscous_candidates = [&](const StatePoint& start, bool prepend_u_minus) {
        const ViscousTransitionResult vt =
            construct_viscous_transition(model, t, start, config.max_iter, config);
        std::vector<StatePoint> head;
        double head_cost = 0.0;
        if (prepend_u_minus && sup_distance(start, u_minus) != 0.0) {
            head.push_back(u_minus);
            head_cost = model.dissipation(u_minus, start) + model.viscous(u_minus, start) + R_minus;
        }
        const std::vector<StatePoint>& seq = vt.transition.states;
        double prefix = head_cost;  // cost through seq[0..k] incl. interior residuals
        for (std::size_t k = 0; k < seq.size(); ++k) {
            if (k > 0) {
                prefix += model.dissipation(seq[k - 1], seq[k]) + model.viscous(seq[k - 1], seq[k]) +
                          vt.residuals[k - 1];
            }
            const double bridge =
                sup_distance(seq[k], u_plus) == 0.0
                    ? 0.0
                    : model.dissipation(seq[k], u_plus) + model.viscous(seq[k], u_plus) +
                          vt.residuals[k];
            std::vector<StatePoint> states = head;
            states.insert(states.end(), seq.begin(), seq.begin() + static_cast<long>(k) + 1);
            if (sup_distance(seq[k], u_plus) != 0.0) states.push_back(u_plus);
            consider(best, std::move(states), prefix + bridge);
        }
    };
    viscous_candidates(u_minus, false);
    for (const double eps : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
        StatePoint kicked(u_minus.size());
        for (std::size_t i = 0; i < kicked.size(); ++i)
            kicked[i] = u_minus[i] + eps * (u_plus[i] - u_minus[i]);
        viscous_candidates(model.search_box.clamp(std::move(kicked)), true);
    }

    // Refined linear segments; gap of a sliding portion vanishes under
    // refinement, so keep doubling while the total improves.
    {
        const int cap = model.dim() == 1 ? config.max_refine_points : config.max_refine_points_nd;
        double prev_total = std::numeric_limits<double>::infinity();
        for (int K = 2; K <= cap; K *= 2) {
            std::vector<StatePoint> states(static_cast<std::size_t>(K) + 1);
            for (int j = 0; j <= K; ++j) {
                const double th = static_cast<double>(j) / K;
                StatePoint p(u_minus.size());
                for (std::size_t i = 0; i < p.size(); ++i)
                    p[i] = (1.0 - th) * u_minus[i] + th * u_plus[i];
                states[static_cast<std::size_t>(j)] = model.search_box.clamp(std::move(p));
            }
            CostBreakdown bk;
            bool aborted = false;
            for (int j = 1; j <= K; ++j) {
                bk.var_part += model.dissipation(states[static_cast<std::size_t>(j - 1)],
                                                 states[static_cast<std::size_t>(j)]);
                bk.gap_part += model.viscous(states[static_cast<std::size_t>(j - 1)],
                                             states[static_cast<std::size_t>(j)]);
            }
            for (int j = 0; j < K; ++j) {
                bk.residual_part += stability::residual(model, t, states[static_cast<std::size_t>(j)],
                                                        config.stability);
                if (bk.total() >= best.total) {  // residual sum only grows
                    aborted = true;
                    break;
                }
            }
            if (!aborted) consider(best, std::move(states), bk.total());
            if (aborted) break;
            const double now = bk.total();
            if (now >= prev_total - 1e-14 || bk.gap_part < config.sliding_gap_tol) break;
            prev_total = now;
        }
    }

    // 1D short-path oracle: exhaustive K-point paths over a coarse lattice,
    // with branch-and-bound pruning against the current best.
    if (model.dim() == 1 && config.max_path_points >= 3) {
        const int L = config.lattice_points;
        std::vector<double> lattice(static_cast<std::size_t>(L));
        std::vector<double> lattice_R(static_cast<std::size_t>(L));
        for (int i = 0; i < L; ++i) {
            lattice[static_cast<std::size_t>(i)] =
                model.search_box.lo[0] + model.search_box.width(0) * static_cast<double>(i) / (L - 1);
            lattice_R[static_cast<std::size_t>(i)] = stability::residual(
                model, t, state1(lattice[static_cast<std::size_t>(i)]), config.stability);
        }
        const int max_interior = config.max_path_points - 2;
        std::vector<int> path;
        auto seg = [&](const StatePoint& a, const StatePoint& b) {
            return model.dissipation(a, b) + model.viscous(a, b);
        };
        std::function<void(StatePoint, double, int)> extend = [&](StatePoint cur, double cost,
                                                                  int depth) {
            const double total_here = cost + seg(cur, u_plus);
            if (total_here < best.total) {
                std::vector<StatePoint> states{u_minus};
                for (int idx : path) states.push_back(state1(lattice[static_cast<std::size_t>(idx)]));
                states.push_back(u_plus);
                best.total = total_here;
                best.states = std::move(states);
            }
            if (depth >= max_interior) return;
            for (int i = 0; i < L; ++i) {
                const double step =
                    seg(cur, state1(lattice[static_cast<std::size_t>(i)])) + lattice_R[static_cast<std::size_t>(i)];
                if (step == 0.0) continue;
                if (cost + step >= best.total) continue;
                path.push_back(i);
                extend(state1(lattice[static_cast<std::size_t>(i)]), cost + step, depth + 1);
                path.pop_back();
            }
        };
        extend(u_minus, R_minus, 0);
    }

    out.witness = from_states(t, best.states);
    out.breakdown = transition_cost(model, out.witness, config);
    out.cost = out.breakdown.total();

    const double drop = model.energy(t, u_minus) - model.energy(t, u_plus);
    const double guard = 1e-9 * std::max(1.0, std::abs(out.cost));
    if (out.cost < model.dissipation(u_minus, u_plus) - guard)
        throw EvaluationError("jump_cost: cost fell below d(u-,u+); invalid transition cost");
    if (out.cost < drop - guard)
        throw EvaluationError("jump_cost: cost fell below the frozen-time energy drop");
    return out;
}

JumpConditionReport verify_jump_conditions(const RisModel& model, double t,
                                           const StatePoint& u_minus, const StatePoint& u_mid,
                                           const StatePoint& u_plus,
                                           const TransitionConfig& config)
{
    JumpConditionReport report;
    const double e_minus = model.energy(t, u_minus);
    const double e_mid = model.energy(t, u_mid);
    const double e_plus = model.energy(t, u_plus);
    report.res_left = std::abs(e_minus - e_mid - jump_cost(model, t, u_minus, u_mid, config).cost);
    report.res_right = std::abs(e_mid - e_plus - jump_cost(model, t, u_mid, u_plus, config).cost);
    report.res_total =
        std::abs(e_minus - e_plus - jump_cost(model, t, u_minus, u_plus, config).cost);
    return report;
}

bool energy_drop_bound_check(const RisModel& model, const Transition& transition,
                             const TransitionConfig& config)
{
    transition.validate();
    if (transition.points() == 0) return true;
    const CostBreakdown bk = transition_cost(model, transition, config);
    const double e_first = model.energy(transition.time, transition.states.front());
    const double e_last = model.energy(transition.time, transition.states.back());
    const double tol = config.stability.tol_stable * std::max(1, transition.points());
    return e_last + bk.total() >= e_first - tol;
}

Transition rescale_transition(const RisModel& model, const Transition& transition)
{
    transition.validate();
    Transition out = transition;
    const int K = transition.points();
    if (K <= 1) {
        if (K == 1) out.params[0] = 0.0;
        return out;
    }
    const double s0 = transition.params.front();
    const double sK = transition.params.back();
    double cumulative = 0.0;
    for (int j = 0; j < K; ++j) {
        if (j > 0) {
            cumulative += model.dissipation(transition.states[static_cast<std::size_t>(j - 1)],
                                            transition.states[static_cast<std::size_t>(j)]) +
                          model.viscous(transition.states[static_cast<std::size_t>(j - 1)],
                                        transition.states[static_cast<std::size_t>(j)]);
        }
        out.params[static_cast<std::size_t>(j)] =
            (transition.params[static_cast<std::size_t>(j)] - s0) / (sK - s0) + cumulative;
    }
    return out;
}

std::vector<Segment> decompose_transition(const RisModel& model, const Transition& transition,
                                          const TransitionConfig& config, double step_threshold)
{
    transition.validate();
    const int K = transition.points();
    std::vector<Segment> segments;
    if (K == 0) return segments;
    if (K == 1) {
        segments.push_back({0, 0, SegmentKind::sliding});
        return segments;
    }

    std::vector<double> steps(static_cast<std::size_t>(K - 1));
    for (int j = 1; j < K; ++j)
        steps[static_cast<std::size_t>(j - 1)] =
            model.dissipation(transition.states[static_cast<std::size_t>(j - 1)],
                              transition.states[static_cast<std::size_t>(j)]);
    if (step_threshold <= 0.0) {
        std::vector<double> nz;
        for (double s : steps)
            if (s > 0.0) nz.push_back(s);
        if (nz.empty()) {
            segments.push_back({0, K - 1, SegmentKind::sliding});
            return segments;
        }
        std::sort(nz.begin(), nz.end());
        step_threshold = 10.0 * nz[nz.size() / 2];
    }

    std::vector<bool> jumpy(static_cast<std::size_t>(K - 1));
    for (int j = 0; j < K - 1; ++j) {
        const double R = stability::residual(model, transition.time,
                                             transition.states[static_cast<std::size_t>(j)],
                                             config.stability);
        jumpy[static_cast<std::size_t>(j)] =
            steps[static_cast<std::size_t>(j)] > step_threshold || R > config.stability.tol_stable;
    }

    int start = 0;
    for (int j = 1; j < K - 1; ++j) {
        if (jumpy[static_cast<std::size_t>(j)] != jumpy[static_cast<std::size_t>(start)]) {
            segments.push_back({start, j,
                                jumpy[static_cast<std::size_t>(start)] ? SegmentKind::pure_jump
                                                                       : SegmentKind::sliding});
            start = j;
        }
    }
    segments.push_back({start, K - 1,
                        jumpy[static_cast<std::size_t>(start)] ? SegmentKind::pure_jump
                                                               : SegmentKind::sliding});
    return segments;
}

}  // namespace veris::transitions
