#include "veris/core.hpp"

#include <cmath>
#include <vector>

namespace veris {

namespace {

// Lattice walk over the box: n-dimensional odometer with `per_axis`
// points per coordinate, capped so the total point count stays sane
// for higher dimensions.
template <typename F>
void for_each_lattice_point(const Box& box, int per_axis, F&& fn)
{
    const int n = box.dim();
    long long total = 1;
    int g = per_axis;
    while (g > 3) {
        total = 1;
        bool overflow = false;
        for (int i = 0; i < n; ++i) {
            total *= g;
            if (total > 100000) {
                overflow = true;
                break;
            }
        }
        if (!overflow) break;
        g = (g + 1) / 2;
    }
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    StatePoint x(static_cast<std::size_t>(n), 0.0);
    while (true) {
        for (int i = 0; i < n; ++i) {
            const double s = (g == 1) ? 0.5 : static_cast<double>(idx[static_cast<std::size_t>(i)]) / (g - 1);
            x[static_cast<std::size_t>(i)] = box.lo[static_cast<std::size_t>(i)] + s * box.width(static_cast<std::size_t>(i));
        }
        fn(x);
        int k = 0;
        while (k < n) {
            if (++idx[static_cast<std::size_t>(k)] < g) break;
            idx[static_cast<std::size_t>(k)] = 0;
            ++k;
        }
        if (k == n) break;
    }
}

}  // namespace

double perturbed_energy(const RisModel& model, double t, const StatePoint& x)
{
    const double e = model.energy(t, x);
    const double d = model.dissipation(model.base_point, x);
    if (!std::isfinite(e) || !std::isfinite(d))
        throw EvaluationError("perturbed_energy: non-finite evaluation of E or d");
    return e + d + model.offset;
}

double total_dissipation(const RisModel& model, const StatePoint& x, const StatePoint& y)
{
    return model.dissipation(x, y) + model.viscous(x, y);
}

double gronwall_envelope(const RisModel& model, double F0, double t)
{
    return F0 * std::exp(model.power_const * t);
}

double normalization_offset(const RisModel::Energy& energy, const RisModel::PairCost& dissipation,
                            const StatePoint& base_point, const Box& box, double T,
                            int samples_per_axis, int time_samples)
{
    double inf = std::numeric_limits<double>::infinity();
    for (int k = 0; k < time_samples; ++k) {
        const double t = (time_samples == 1) ? 0.0 : T * static_cast<double>(k) / (time_samples - 1);
        for_each_lattice_point(box, samples_per_axis, [&](const StatePoint& x) {
            const double v = energy(t, x) + dissipation(base_point, x);
            if (v < inf) inf = v;
        });
    }
    if (!std::isfinite(inf)) throw EvaluationError("normalization_offset: non-finite energy scan");
    // Unit margin keeps F bounded away from zero on the box, so a finite
    // power-control constant exists.
    const double margin = 1.0;
    return (inf < 0.0 ? -inf : 0.0) + margin;
}

double power_bound_constant(const RisModel& model, double T, int samples_per_axis, int time_samples)
{
    double cp = 0.0;
    for (int k = 0; k < time_samples; ++k) {
        const double t = (time_samples == 1) ? 0.0 : T * static_cast<double>(k) / (time_samples - 1);
        for_each_lattice_point(model.search_box, samples_per_axis, [&](const StatePoint& x) {
            const double F = perturbed_energy(model, t, x);
            const double P = std::abs(model.power(t, x));
            if (F > 1e-12) {
                const double r = P / F;
                if (r > cp) cp = r;
            }
        });
    }
    return cp * 1.05 + 1e-12;
}

}  // namespace veris
