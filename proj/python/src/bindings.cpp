#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "veris/cli.hpp"
#include "veris/models.hpp"
#include "veris/variation.hpp"

namespace py = pybind11;
using namespace veris;

namespace {

scheme::SchemeConfig make_scheme_config(double tol_f, double tol_x, double tol_stable,
                                        int grid_points, int multistart, std::uint64_t seed)
{
    scheme::SchemeConfig cfg;
    cfg.stability.minimize.tol_f = tol_f;
    cfg.stability.minimize.tol_x = tol_x;
    cfg.stability.minimize.grid_points = grid_points;
    cfg.stability.minimize.multistart = multistart;
    cfg.stability.tol_stable = tol_stable;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Visco-energetic evolutions of rate-independent systems";

    py::register_exception<EvaluationError>(m, "EvaluationError");
    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<WrongRegimeError>(m, "WrongRegimeError");

    py::class_<RisModel>(m, "RisModel")
        .def_property_readonly("dim", &RisModel::dim)
        .def_readonly("name", &RisModel::name)
        .def_readonly("horizon", &RisModel::horizon)
        .def_readonly("offset", &RisModel::offset)
        .def_readonly("power_const", &RisModel::power_const)
        .def("energy", [](const RisModel& s, double t, const StatePoint& x) { return s.energy(t, x); })
        .def("power", [](const RisModel& s, double t, const StatePoint& x) { return s.power(t, x); })
        .def("d", [](const RisModel& s, const StatePoint& x, const StatePoint& y) { return s.dissipation(x, y); })
        .def("delta", [](const RisModel& s, const StatePoint& x, const StatePoint& y) { return s.viscous(x, y); })
        .def("total_dissipation", &total_dissipation)
        .def("perturbed_energy", &perturbed_energy)
        .def("gronwall_envelope", &gronwall_envelope);

    m.def(
        "double_well_model",
        [](double alpha_plus, double alpha_minus, double mu, double u0, double T, double box_lo,
           double box_hi) {
            models::DoubleWellParams p;
            p.alpha_plus = alpha_plus;
            p.alpha_minus = alpha_minus;
            p.mu = mu;
            p.u0 = u0;
            p.T = T;
            p.box_lo = box_lo;
            p.box_hi = box_hi;
            return models::double_well_model(p);
        },
        py::arg("alpha_plus") = 1.0, py::arg("alpha_minus") = 1.0, py::arg("mu") = 2.0,
        py::arg("u0") = -1.5, py::arg("T") = -1.0, py::arg("box_lo") = -3.0,
        py::arg("box_hi") = 3.0);

    m.def(
        "convex_quadratic_model",
        [](double a, double alpha, double mu, double T) {
            models::ConvexQuadraticParams p;
            p.a = a;
            p.alpha = alpha;
            p.mu = mu;
            p.T = T;
            return models::convex_quadratic_model(p);
        },
        py::arg("a") = 1.0, py::arg("alpha") = 1.0, py::arg("mu") = 1.0, py::arg("T") = 2.0);

    m.def(
        "marginal_model",
        [](double alpha, double mu, double T) {
            models::MarginalModelParams p;
            p.alpha = alpha;
            p.mu = mu;
            p.T = T;
            return models::marginal_model(p);
        },
        py::arg("alpha") = 1.0, py::arg("mu") = 1.0, py::arg("T") = 2.0);

    m.def(
        "allen_cahn_model",
        [](int nodes, double mu, double alpha, double T, double load_b) {
            models::AllenCahnParams p;
            p.nodes = nodes;
            p.mu = mu;
            p.alpha = alpha;
            p.T = T;
            p.load = LoadProfile::linear(0.0, load_b);
            return models::allen_cahn_model(p);
        },
        py::arg("nodes") = 32, py::arg("mu") = 1.0, py::arg("alpha") = 1.0, py::arg("T") = 1.0,
        py::arg("load_b") = 1.0);

    py::class_<scheme::StepRecord>(m, "StepRecord")
        .def_readonly("d_step", &scheme::StepRecord::d_step)
        .def_readonly("delta_step", &scheme::StepRecord::delta_step)
        .def_readonly("residual_prev", &scheme::StepRecord::residual_prev)
        .def_readonly("energy", &scheme::StepRecord::energy)
        .def_readonly("power_integral", &scheme::StepRecord::power_integral);

    py::class_<scheme::DiscreteTrajectory>(m, "DiscreteTrajectory")
        .def_property_readonly("times",
                               [](const scheme::DiscreteTrajectory& t) { return t.partition.times; })
        .def_readonly("states", &scheme::DiscreteTrajectory::states)
        .def_readonly("steps", &scheme::DiscreteTrajectory::steps)
        .def_readonly("valid", &scheme::DiscreteTrajectory::valid)
        .def("state_at", &scheme::DiscreteTrajectory::state_at)
        .def("V_tau", &scheme::DiscreteTrajectory::V_tau)
        .def("W_tau", &scheme::DiscreteTrajectory::W_tau);

    m.def(
        "solve_incremental",
        [](const RisModel& model, int N, const StatePoint& u0, double tol_f, double tol_x,
           double tol_stable, int grid_points, int multistart, std::uint64_t seed) {
            const auto cfg =
                make_scheme_config(tol_f, tol_x, tol_stable, grid_points, multistart, seed);
            return scheme::solve_incremental(model, scheme::Partition::uniform(model.horizon, N),
                                             u0, cfg);
        },
        py::arg("model"), py::arg("N"), py::arg("u0"), py::arg("tol_f") = 1e-12,
        py::arg("tol_x") = 1e-10, py::arg("tol_stable") = 1e-7, py::arg("grid_points") = 2048,
        py::arg("multistart") = 8, py::arg("seed") = 42);

    m.def(
        "check_discrete_energy_identity",
        [](const RisModel& model, const scheme::DiscreteTrajectory& traj) {
            return scheme::check_discrete_energy_identity(model, traj, scheme::SchemeConfig{});
        },
        py::arg("model"), py::arg("traj"));

    m.def(
        "check_discrete_stability",
        [](const RisModel& model, const scheme::DiscreteTrajectory& traj, int samples,
           std::uint64_t seed) {
            scheme::SchemeConfig cfg;
            cfg.seed = seed;
            const auto rep = scheme::check_discrete_stability(model, traj, samples, cfg);
            return py::make_tuple(rep.ok(), rep.checks);
        },
        py::arg("model"), py::arg("traj"), py::arg("samples") = 200, py::arg("seed") = 42);

    m.def(
        "residual",
        [](const RisModel& model, double t, const StatePoint& x) {
            return stability::residual(model, t, x, stability::StabilityConfig{});
        },
        py::arg("model"), py::arg("t"), py::arg("x"));

    m.def(
        "moreau_yosida",
        [](const RisModel& model, double t, const StatePoint& x) {
            return stability::moreau_yosida(model, t, x, stability::StabilityConfig{});
        },
        py::arg("model"), py::arg("t"), py::arg("x"));

    m.def(
        "is_quasi_stable",
        [](const RisModel& model, double t, const StatePoint& x, double Q) {
            return stability::is_quasi_stable(model, t, x, Q, stability::StabilityConfig{});
        },
        py::arg("model"), py::arg("t"), py::arg("x"), py::arg("Q"));

    m.def(
        "jump_cost",
        [](const RisModel& model, double t, const StatePoint& um, const StatePoint& up) {
            const auto r = transitions::jump_cost(model, t, um, up, transitions::TransitionConfig{});
            py::dict breakdown;
            breakdown["var_part"] = r.breakdown.var_part;
            breakdown["gap_part"] = r.breakdown.gap_part;
            breakdown["residual_part"] = r.breakdown.residual_part;
            return py::make_tuple(r.cost, breakdown, r.witness.states);
        },
        py::arg("model"), py::arg("t"), py::arg("u_minus"), py::arg("u_plus"));

    m.def(
        "construct_viscous_transition",
        [](const RisModel& model, double t, const StatePoint& u_start, int max_iter) {
            const auto r = transitions::construct_viscous_transition(model, t, u_start, max_iter,
                                                                     transitions::TransitionConfig{});
            return py::make_tuple(r.transition.states, r.converged, r.limit);
        },
        py::arg("model"), py::arg("t"), py::arg("u_start"), py::arg("max_iter") = 200);

    m.def(
        "analytic_ve_solution_1d",
        [](double alpha_plus, double alpha_minus, double mu, double u0, double t) {
            models::DoubleWellParams p;
            p.alpha_plus = alpha_plus;
            p.alpha_minus = alpha_minus;
            p.mu = mu;
            p.u0 = u0;
            const auto s = models::analytic_ve_solution_1d(p, t);
            py::dict out;
            out["u"] = s.u;
            out["jumped"] = s.jumped;
            out["t_jump"] = s.t_jump;
            out["u_pre"] = s.u_pre;
            out["u_post"] = s.u_post;
            return out;
        },
        py::arg("alpha_plus") = 1.0, py::arg("alpha_minus") = 1.0, py::arg("mu") = 2.0,
        py::arg("u0") = -1.5, py::arg("t") = 0.0);

    m.def(
        "modified_maxwell_jump",
        [](double mu, double u_minus) {
            models::DoubleWellParams p;
            p.mu = mu;
            const auto r = models::modified_maxwell_jump(p, u_minus);
            return py::make_tuple(r.u_plus_first, r.u_plus_final, r.area_residual);
        },
        py::arg("mu"), py::arg("u_minus"));

    m.def(
        "subcritical_onset",
        [](double mu) {
            models::DoubleWellParams p;
            p.mu = mu;
            return models::subcritical_onset(p);
        },
        py::arg("mu"));

    m.def(
        "energetic_maxwell_jump",
        [](double t, double u0) {
            models::DoubleWellParams p;
            p.mu = 0.0;
            p.u0 = u0;
            return models::energetic_maxwell_jump(p, t);
        },
        py::arg("t"), py::arg("u0") = -1.5);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
