#ifndef VERIS_CORE_HPP
#define VERIS_CORE_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "veris/common.hpp"

namespace veris {

/// Time-dependent external load l(t) together with its derivative.
/// Linear loads are tagged so downstream consumers can integrate the
/// power term in closed form.
struct LoadProfile {
    enum class Kind { linear, general };

    std::function<double(double)> value;
    std::function<double(double)> derivative;
    Kind kind = Kind::linear;
    double a = 0.0;  ///< linear intercept, valid when kind == linear
    double b = 0.0;  ///< linear slope, valid when kind == linear

    static LoadProfile linear(double a, double b)
    {
        LoadProfile p;
        p.a = a;
        p.b = b;
        p.kind = Kind::linear;
        p.value = [a, b](double t) { return a + b * t; };
        p.derivative = [b](double) { return b; };
        return p;
    }

    static LoadProfile general(std::function<double(double)> f, std::function<double(double)> df)
    {
        LoadProfile p;
        p.kind = Kind::general;
        p.value = std::move(f);
        p.derivative = std::move(df);
        return p;
    }
};

/// One-sided dissipation rates for 1D costs d(u,v) = a+·(v−u)+ + a−·(v−u)−.
/// Bundled 1D models record them so the local derivative test can be run.
struct OneSidedRates {
    double plus = 1.0;
    double minus = 1.0;
};

/// The problem tuple: energy E(t,x), its exact time derivative P(t,x),
/// dissipation quasi-distance d, viscous correction delta, reference
/// point and normalization constants, plus the search box the inner
/// minimizers operate on.
///
/// Immutable after construction; all evaluators are pure, so a model can
/// be shared by concurrent read-only consumers.
struct RisModel {
    using Energy = std::function<double(double, const StatePoint&)>;
    using PairCost = std::function<double(const StatePoint&, const StatePoint&)>;

    Energy energy;
    Energy power;
    PairCost dissipation;  ///< d(x,y) >= 0, d(x,x) = 0, triangle inequality
    PairCost viscous;      ///< delta(x,y) >= 0, delta(x,x) = 0

    StatePoint base_point;   ///< reference x_o
    double offset = 0.0;     ///< F_o >= 0, normalizes F = E + d(x_o,.) + F_o >= 0
    double power_const = 1;  ///< C_P with |P| <= C_P * F on the box
    double horizon = 1.0;    ///< time interval [0, T] the model is set up for
    Box search_box;

    std::string name;

    /// Exact closed form of the power integral t -> ∫_{t0}^{t1} P(s,x) ds,
    /// set by every bundled model (their energies are affine in l(t)).
    /// When absent the scheme falls back to the midpoint rule.
    std::function<double(double, double, const StatePoint&)> power_integral;

    /// One-sided rates of a 1D dissipation, when d has that form.
    std::optional<OneSidedRates> one_sided;

    int dim() const { return static_cast<int>(base_point.size()); }
};

/// Perturbed energy F(t,x) = E(t,x) + d(x_o,x) + F_o.
double perturbed_energy(const RisModel& model, double t, const StatePoint& x);

/// Total dissipation D(x,y) = d(x,y) + delta(x,y).
double total_dissipation(const RisModel& model, const StatePoint& x, const StatePoint& y);

/// A priori ceiling F0 * exp(C_P * t) for the perturbed energy along
/// any run starting at level F0.
double gronwall_envelope(const RisModel& model, double F0, double t);

/// Grid-scan helpers used by the model constructors to normalize F >= 0
/// (with a unit margin so the power-control constant stays finite) and
/// to compute C_P over the box. `samples_per_axis` points per coordinate,
/// `time_samples` slices over [0,T].
double normalization_offset(const RisModel::Energy& energy, const RisModel::PairCost& dissipation,
                            const StatePoint& base_point, const Box& box, double T,
                            int samples_per_axis = 257, int time_samples = 33);

double power_bound_constant(const RisModel& model, double T, int samples_per_axis = 257,
                            int time_samples = 33);

}  // namespace veris

#endif
