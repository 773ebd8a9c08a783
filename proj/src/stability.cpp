#include "veris/stability.hpp"

#include <cmath>
#include <limits>

namespace veris::stability {

StabilityReport stability_report(const RisModel& model, double t, const StatePoint& x,
                                 const StabilityConfig& config)
{
    auto objective = [&](const StatePoint& y) {
        return model.energy(t, y) + model.dissipation(x, y) + model.viscous(x, y);
    };
    const StatePoint hints[] = {x};
    const optim::MinimizeResult r =
        optim::global_minimize_nd(objective, model.search_box, config.minimize, hints);

    StabilityReport report;
    report.yosida = r.value;
    report.minimal_set = r.all_minimizers;
    report.on_boundary = r.on_boundary;
    const double e = model.energy(t, x);
    if (!std::isfinite(e)) throw EvaluationError("stability_report: non-finite energy at x");

    // When x itself achieves the minimum (D(x,x) = 0), it belongs to the
    // minimal set exactly; keep the exact point so fixed points of the
    // scheme stay bit-stable. Machine-level threshold only: anything
    // looser would freeze slightly unstable iterates.
    if (e <= report.yosida + 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(e))) {
        report.yosida = std::min(report.yosida, e);
        bool replaced = false;
        for (StatePoint& y : report.minimal_set) {
            if (sup_distance(y, x) <= 1e-7) {
                y = x;
                replaced = true;
                break;
            }
        }
        if (!replaced) report.minimal_set.insert(report.minimal_set.begin(), x);
    }

    report.residual_raw = e - report.yosida;
    report.residual = report.residual_raw > 0.0 ? report.residual_raw : 0.0;
    report.stable = report.residual <= config.tol_stable;
    return report;
}

std::pair<double, std::vector<StatePoint>> moreau_yosida(const RisModel& model, double t,
                                                         const StatePoint& x,
                                                         const StabilityConfig& config)
{
    const StabilityReport report = stability_report(model, t, x, config);
    return {report.yosida, report.minimal_set};
}

double residual(const RisModel& model, double t, const StatePoint& x,
                const StabilityConfig& config)
{
    return stability_report(model, t, x, config).residual;
}

bool is_quasi_stable(const RisModel& model, double t, const StatePoint& x, double Q,
                     const StabilityConfig& config)
{
    if (Q < 0.0) throw ConfigError("is_quasi_stable: Q must be nonnegative");
    return residual(model, t, x, config) <= Q + config.tol_stable;
}

bool local_stability_check_1d(const RisModel& model, double t, const StatePoint& x,
                              const StabilityConfig& config)
{
    (void)config;
    if (model.dim() != 1 || !model.one_sided)
        throw ConfigError("local_stability_check_1d: needs a 1D model with one-sided rates");
    const double h = 1e-6;
    const double dE =
        (model.energy(t, state1(x[0] + h)) - model.energy(t, state1(x[0] - h))) / (2.0 * h);
    const double tol = 1e-7;
    return dE >= -model.one_sided->minus - tol && dE <= model.one_sided->plus + tol;
}

const StatePoint& select_from_minimal_set(const RisModel& model, const StatePoint& from,
                                          const std::vector<StatePoint>& candidates)
{
    if (candidates.empty()) throw ConfigError("select_from_minimal_set: empty candidate set");
    const StatePoint* best = &candidates.front();
    double best_d = model.dissipation(from, *best);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double di = model.dissipation(from, candidates[i]);
        if (di < best_d - 1e-15 || (std::abs(di - best_d) <= 1e-15 && lex_less(candidates[i], *best))) {
            best = &candidates[i];
            best_d = di;
        }
    }
    return *best;
}

}  // namespace veris::stability
