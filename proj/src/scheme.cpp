#include "veris/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "veris/variation.hpp"

namespace veris::scheme {

Partition Partition::uniform(double T, int N)
{
    if (!(T > 0.0) || N < 1) throw ConfigError("Partition::uniform: need T > 0 and N >= 1");
    Partition p;
    p.times.resize(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) p.times[static_cast<std::size_t>(n)] = T * static_cast<double>(n) / N;
    p.times.back() = T;
    return p;
}

void Partition::validate() const
{
    if (times.size() < 2) throw ConfigError("Partition: need at least two times");
    if (times.front() != 0.0) throw ConfigError("Partition: must start at t = 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw ConfigError("Partition: times must strictly increase");
    }
}

double Partition::mesh() const
{
    double m = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) m = std::max(m, times[i] - times[i - 1]);
    return m;
}

const StatePoint& DiscreteTrajectory::state_at(double t) const
{
    if (t <= partition.times.front()) return states.front();
    const auto it = std::lower_bound(partition.times.begin(), partition.times.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - partition.times.begin());
    return states[std::min(idx, states.size() - 1)];
}

double DiscreteTrajectory::V_tau(int n) const
{
    double v = 0.0;
    for (int j = 0; j < n && j < static_cast<int>(steps.size()); ++j) v += steps[static_cast<std::size_t>(j)].d_step;
    return v;
}

double DiscreteTrajectory::W_tau(int n) const
{
    double w = 0.0;
    for (int j = 0; j < n && j < static_cast<int>(steps.size()); ++j) {
        const StepRecord& s = steps[static_cast<std::size_t>(j)];
        w += s.d_step + s.delta_step + s.residual_prev;
    }
    return w;
}

namespace {

// Exact when the model provides the closed-form power primitive,
// midpoint rule with a second-difference error estimate otherwise.
std::pair<double, double> power_integral(const RisModel& model, double t0, double t1,
                                         const StatePoint& x)
{
    if (model.power_integral) return {model.power_integral(t0, t1, x), 0.0};
    const double tau = t1 - t0;
    const double mid = 0.5 * (t0 + t1);
    const double pm = model.power(mid, x);
    const double second_diff = model.power(t0, x) - 2.0 * pm + model.power(t1, x);
    return {tau * pm, std::abs(second_diff) * tau / 6.0};
}

}  // namespace

DiscreteTrajectory solve_incremental(const RisModel& model, const Partition& partition,
                                     const StatePoint& U0, const SchemeConfig& config)
{
    partition.validate();
    if (!model.search_box.contains(U0))
        throw ConfigError("solve_incremental: initial state outside the search box");

    DiscreteTrajectory traj;
    traj.partition = partition;
    traj.states.push_back(U0);

    const int N = partition.steps();
    for (int n = 1; n <= N; ++n) {
        const double tn = partition.times[static_cast<std::size_t>(n)];
        const double tp = partition.times[static_cast<std::size_t>(n - 1)];
        const StatePoint& prev = traj.states.back();
        const stability::StabilityReport rep =
            stability::stability_report(model, tn, prev, config.stability);
        if (rep.on_boundary) {
            traj.valid = false;
            traj.invalid_step = n;
            return traj;
        }
        const StatePoint next = stability::select_from_minimal_set(model, prev, rep.minimal_set);

        StepRecord rec;
        rec.d_step = model.dissipation(prev, next);
        rec.delta_step = model.viscous(prev, next);
        rec.residual_prev = rep.residual;
        rec.energy = model.energy(tn, next);
        const auto [pint, perr] = power_integral(model, tp, tn, prev);
        rec.power_integral = pint;
        rec.quad_error = perr;
        traj.steps.push_back(rec);
        traj.states.push_back(next);
    }
    return traj;
}

DiscreteStabilityReport check_discrete_stability(const RisModel& model,
                                                 const DiscreteTrajectory& traj, int sample_count,
                                                 const SchemeConfig& config)
{
    DiscreteStabilityReport report;
    const int dim = model.dim();
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<StatePoint> pool(static_cast<std::size_t>(sample_count));
    for (auto& v : pool) {
        v.resize(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i)
            v[static_cast<std::size_t>(i)] = model.search_box.lo[static_cast<std::size_t>(i)] +
                                             model.search_box.width(static_cast<std::size_t>(i)) * unit(rng);
    }

    const double tol = config.stability.tol_stable;
    for (std::size_t n = 1; n < traj.states.size(); ++n) {
        const double tn = traj.partition.times[n];
        const StatePoint& un = traj.states[n];
        const StatePoint& up = traj.states[n - 1];
        const double en = model.energy(tn, un);
        for (const StatePoint& v : pool) {
            const double rhs = model.energy(tn, v) + model.dissipation(un, v) + model.viscous(up, v);
            ++report.checks;
            if (en > rhs + tol) {
                if (report.violations.size() < 100)
                    report.violations.push_back({static_cast<int>(n), v, en - rhs});
            }
        }
    }
    return report;
}

double check_discrete_energy_identity(const RisModel& model, const DiscreteTrajectory& traj,
                                      const SchemeConfig& config)
{
    stability::StabilityConfig verify = config.stability;
    verify.minimize.grid_points = verify.minimize.grid_points * 2 + 1;

    double worst = 0.0;
    for (std::size_t n = 1; n < traj.states.size(); ++n) {
        const double tn = traj.partition.times[n];
        const double tp = traj.partition.times[n - 1];
        const StatePoint& un = traj.states[n];
        const StatePoint& up = traj.states[n - 1];
        const double R = stability::residual(model, tn, up, verify);
        const auto [pint, perr] = power_integral(model, tp, tn, up);
        const double lhs = model.energy(tn, un) + total_dissipation(model, up, un) + R;
        const double rhs = model.energy(tp, up) + pint;
        worst = std::max(worst, std::abs(lhs - rhs) - perr);
    }
    return std::max(worst, 0.0);
}

AprioriReport check_apriori_bounds(const RisModel& model, const DiscreteTrajectory& traj,
                                   const SchemeConfig& config)
{
    AprioriReport report;
    report.F0 = perturbed_energy(model, 0.0, traj.states.front());

    // C1: coarse bound for d(x_o, .) over the box.
    {
        const int dim = model.dim();
        double worst = 0.0;
        const int g = dim <= 4 ? 17 : 3;
        std::vector<int> idx(static_cast<std::size_t>(dim), 0);
        StatePoint x(static_cast<std::size_t>(dim), 0.0);
        while (true) {
            for (int i = 0; i < dim; ++i)
                x[static_cast<std::size_t>(i)] = model.search_box.lo[static_cast<std::size_t>(i)] +
                                                 model.search_box.width(static_cast<std::size_t>(i)) *
                                                     static_cast<double>(idx[static_cast<std::size_t>(i)]) / (g - 1);
            worst = std::max(worst, model.dissipation(model.base_point, x));
            int k = 0;
            while (k < dim) {
                if (++idx[static_cast<std::size_t>(k)] < g) break;
                idx[static_cast<std::size_t>(k)] = 0;
                ++k;
            }
            if (k == dim) break;
        }
        report.C1 = worst;
    }
    report.C2 = gronwall_envelope(model, report.F0, traj.partition.T()) + report.C1;

    const double tol = config.stability.tol_stable;
    report.envelope_min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const double tn = traj.partition.times[n];
        const double F = perturbed_energy(model, tn, traj.states[n]);
        const double slack = gronwall_envelope(model, report.F0, tn) - F;
        report.envelope_min_slack = std::min(report.envelope_min_slack, slack);
        if (slack < -tol) report.envelope_ok = false;
    }

    double dissipated = 0.0;
    for (const StepRecord& s : traj.steps) dissipated += s.d_step + s.delta_step + s.residual_prev;
    report.sum_slack = report.C2 - dissipated;
    report.sum_ok = report.sum_slack >= -tol;
    return report;
}

std::vector<RefinementEntry> refinement_study(const RisModel& model, const StatePoint& U0,
                                              const std::vector<int>& step_counts,
                                              const SchemeConfig& config, int threads)
{
    if (step_counts.size() < 1) throw ConfigError("refinement_study: need at least one mesh");
    for (std::size_t i = 1; i < step_counts.size(); ++i) {
        if (step_counts[i] <= step_counts[i - 1])
            throw ConfigError("refinement_study: step counts must strictly increase");
    }

    std::vector<RefinementEntry> entries(step_counts.size());

    auto run_one = [&](std::size_t i) {
        const int N = step_counts[i];
        const Partition part = Partition::uniform(model.horizon, N);
        RefinementEntry e;
        e.n_steps = N;
        e.mesh = part.mesh();
        e.trajectory = solve_incremental(model, part, U0, config);
        if (!e.trajectory.valid)
            throw EvaluationError("refinement_study: invalid run (boundary minimizer) at mesh index " +
                                  std::to_string(i));
        variation::VariationConfig vcfg;
        vcfg.transitions.stability = config.stability;
        const variation::RegulatedCurve curve =
            variation::curve_from_trajectory(model, e.trajectory, vcfg);
        e.balance_residual = variation::energy_balance_report(model, curve, vcfg).max_residual;
        entries[i] = std::move(e);
    };

    if (threads <= 1) {
        for (std::size_t i = 0; i < entries.size(); ++i) run_one(i);
    } else {
        std::size_t next = 0;
        while (next < entries.size()) {
            std::vector<std::future<void>> batch;
            for (int k = 0; k < threads && next < entries.size(); ++k, ++next)
                batch.push_back(std::async(std::launch::async, run_one, next));
            for (auto& f : batch) f.get();
        }
    }
    return entries;
}

}  // namespace veris::scheme
