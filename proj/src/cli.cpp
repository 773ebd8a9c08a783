#include "veris/cli.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>

namespace veris::cli {

using nlohmann::ordered_json;

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void reject_unknown(const ordered_json& j, const std::set<std::string>& allowed,
                    const std::string& where)
{
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key()))
            throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
    }
}

LoadProfile parse_load(const ordered_json& j)
{
    reject_unknown(j, {"kind", "a", "b"}, "model.load");
    const std::string kind = j.value("kind", "linear");
    if (kind != "linear") throw ConfigError("config: only linear loads are configurable");
    return LoadProfile::linear(j.value("a", 0.0), j.value("b", 1.0));
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file " + path.string());
    out << text;
}

std::string csv_header(int dim)
{
    std::string h = "step,t";
    for (int i = 0; i < dim; ++i) h += ",u" + std::to_string(i);
    h += ",E,d_step,delta_step,residual_prev,V_tau,W_tau\n";
    return h;
}

std::string trace_csv(const RisModel& model, const scheme::DiscreteTrajectory& traj)
{
    std::string csv = csv_header(model.dim());
    double V = 0.0, W = 0.0;
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const double t = traj.partition.times[n];
        csv += std::to_string(n) + "," + num(t);
        for (double c : traj.states[n]) csv += "," + num(c);
        if (n == 0) {
            csv += "," + num(model.energy(t, traj.states[n])) + ",0,0,0,0,0\n";
        } else {
            const scheme::StepRecord& s = traj.steps[n - 1];
            V += s.d_step;
            W += s.d_step + s.delta_step + s.residual_prev;
            csv += "," + num(s.energy) + "," + num(s.d_step) + "," + num(s.delta_step) + "," +
                   num(s.residual_prev) + "," + num(V) + "," + num(W) + "\n";
        }
    }
    return csv;
}

ordered_json jump_json(const RisModel& model, const variation::JumpRecord& j)
{
    ordered_json o;
    o["t"] = j.t;
    o["u_minus"] = j.u_minus;
    o["u_mid"] = j.u_mid;
    o["u_plus"] = j.u_plus;
    o["cost_minus"] = j.cost_minus;
    o["cost_plus"] = j.cost_plus;
    o["excess_minus"] = j.cost_minus - model.dissipation(j.u_minus, j.u_mid);
    o["excess_plus"] = j.cost_plus - model.dissipation(j.u_mid, j.u_plus);
    return o;
}

}  // namespace

RisModel RunConfig::build_model() const
{
    if (model_name == "double_well") return models::double_well_model(dw);
    if (model_name == "convex_quadratic") return models::convex_quadratic_model(cq);
    if (model_name == "marginal") {
        auto pair = models::marginal_model(mg);
        return marginal_full ? pair.first : pair.second;
    }
    if (model_name == "allen_cahn") return models::allen_cahn_model(ac);
    throw ConfigError("config: unknown model '" + model_name + "'");
}

RunConfig parse_config(const ordered_json& doc)
{
    RunConfig cfg;
    reject_unknown(doc,
                   {"model", "N", "mesh_list", "tolerances", "seed", "stability_samples", "out",
                    "schema_version"},
                   "root");
    if (doc.contains("schema_version") && doc["schema_version"] != 1)
        throw ConfigError("config: unsupported schema_version");
    if (!doc.contains("model") || !doc["model"].is_object())
        throw ConfigError("config: 'model' object required");
    const ordered_json& m = doc["model"];
    cfg.model_name = m.value("name", "");

    if (cfg.model_name == "double_well") {
        reject_unknown(m, {"name", "alpha_plus", "alpha_minus", "mu", "u0", "T", "box", "load"},
                       "model");
        cfg.dw.alpha_plus = m.value("alpha_plus", 1.0);
        cfg.dw.alpha_minus = m.value("alpha_minus", 1.0);
        cfg.dw.mu = m.value("mu", 2.0);
        cfg.dw.u0 = m.value("u0", -1.5);
        cfg.dw.T = m.value("T", -1.0);
        if (m.contains("box")) {
            cfg.dw.box_lo = m["box"].at(0).get<double>();
            cfg.dw.box_hi = m["box"].at(1).get<double>();
        }
        if (m.contains("load")) {
            cfg.dw.load = parse_load(m["load"]);
            cfg.dw.default_load = false;
        }
        cfg.u0 = state1(cfg.dw.u0);
    } else if (cfg.model_name == "convex_quadratic") {
        reject_unknown(m, {"name", "a", "alpha", "mu", "u0", "T", "box", "load"}, "model");
        cfg.cq.a = m.value("a", 1.0);
        cfg.cq.alpha = m.value("alpha", 1.0);
        cfg.cq.mu = m.value("mu", 1.0);
        cfg.cq.T = m.value("T", 2.0);
        if (m.contains("box")) {
            cfg.cq.box_lo = m["box"].at(0).get<double>();
            cfg.cq.box_hi = m["box"].at(1).get<double>();
        }
        if (m.contains("load")) cfg.cq.load = parse_load(m["load"]);
        cfg.u0 = state1(m.value("u0", 0.0));
    } else if (cfg.model_name == "marginal") {
        reject_unknown(m, {"name", "alpha", "mu", "u0", "T", "box", "load", "full"}, "model");
        cfg.mg.alpha = m.value("alpha", 1.0);
        cfg.mg.mu = m.value("mu", 1.0);
        cfg.mg.T = m.value("T", 2.0);
        cfg.marginal_full = m.value("full", false);
        if (m.contains("box")) {
            cfg.mg.box_lo = m["box"].at(0).get<double>();
            cfg.mg.box_hi = m["box"].at(1).get<double>();
        }
        if (m.contains("load")) cfg.mg.load = parse_load(m["load"]);
        const double z0 = m.value("u0", 0.0);
        cfg.u0 = cfg.marginal_full ? StatePoint{z0, z0} : state1(z0);
    } else if (cfg.model_name == "allen_cahn") {
        reject_unknown(m, {"name", "nodes", "alpha", "mu", "u0", "T", "box", "load"}, "model");
        cfg.ac.nodes = m.value("nodes", 32);
        cfg.ac.alpha = m.value("alpha", 1.0);
        cfg.ac.mu = m.value("mu", 1.0);
        cfg.ac.T = m.value("T", 1.0);
        if (m.contains("box")) {
            cfg.ac.box_lo = m["box"].at(0).get<double>();
            cfg.ac.box_hi = m["box"].at(1).get<double>();
        }
        if (m.contains("load")) cfg.ac.load = parse_load(m["load"]);
        cfg.u0.assign(static_cast<std::size_t>(cfg.ac.nodes), m.value("u0", 0.0));
    } else {
        throw ConfigError("config: model.name must be one of double_well, convex_quadratic, "
                          "marginal, allen_cahn");
    }

    cfg.N = doc.value("N", 500);
    if (cfg.N < 1) throw ConfigError("config: N >= 1 required");
    if (doc.contains("mesh_list")) {
        cfg.mesh_list = doc["mesh_list"].get<std::vector<int>>();
        if (cfg.mesh_list.size() < 2)
            throw ConfigError("config: mesh_list needs at least two entries");
    }
    cfg.scheme.seed = doc.value("seed", 42ULL);
    cfg.stability_samples = doc.value("stability_samples", 1000);

    if (doc.contains("tolerances")) {
        const ordered_json& tl = doc["tolerances"];
        reject_unknown(tl,
                       {"tol_f", "tol_x", "tol_stable", "grid_points", "grid_points_nd",
                        "refine_iters", "multistart", "nd_line_grid", "nd_sweeps",
                        "jump_threshold_factor", "checkpoints"},
                       "tolerances");
        auto& mz = cfg.scheme.stability.minimize;
        mz.tol_f = tl.value("tol_f", mz.tol_f);
        mz.tol_x = tl.value("tol_x", mz.tol_x);
        mz.grid_points = tl.value("grid_points", mz.grid_points);
        mz.grid_points_nd = tl.value("grid_points_nd", mz.grid_points_nd);
        mz.refine_iters = tl.value("refine_iters", mz.refine_iters);
        mz.multistart = tl.value("multistart", mz.multistart);
        mz.nd_line_grid = tl.value("nd_line_grid", mz.nd_line_grid);
        mz.nd_sweeps = tl.value("nd_sweeps", mz.nd_sweeps);
        cfg.scheme.stability.tol_stable = tl.value("tol_stable", cfg.scheme.stability.tol_stable);
        cfg.variation.jump_threshold_factor =
            tl.value("jump_threshold_factor", cfg.variation.jump_threshold_factor);
        cfg.variation.checkpoints = tl.value("checkpoints", cfg.variation.checkpoints);
    }
    cfg.variation.transitions.stability = cfg.scheme.stability;
    cfg.out = doc.value("out", "out");

    // Canonical echo with every default explicit. Thread count is
    // deliberately absent: outputs are identical for any --threads.
    ordered_json eff;
    eff["model"]["name"] = cfg.model_name;
    if (cfg.model_name == "double_well") {
        eff["model"]["alpha_plus"] = cfg.dw.alpha_plus;
        eff["model"]["alpha_minus"] = cfg.dw.alpha_minus;
        eff["model"]["mu"] = cfg.dw.mu;
        eff["model"]["u0"] = cfg.dw.u0;
        eff["model"]["T"] = cfg.dw.T;
        eff["model"]["box"] = {cfg.dw.box_lo, cfg.dw.box_hi};
        if (!cfg.dw.default_load)
            eff["model"]["load"] = {{"kind", "linear"}, {"a", cfg.dw.load.a}, {"b", cfg.dw.load.b}};
    } else if (cfg.model_name == "convex_quadratic") {
        eff["model"]["a"] = cfg.cq.a;
        eff["model"]["alpha"] = cfg.cq.alpha;
        eff["model"]["mu"] = cfg.cq.mu;
        eff["model"]["u0"] = cfg.u0[0];
        eff["model"]["T"] = cfg.cq.T;
        eff["model"]["box"] = {cfg.cq.box_lo, cfg.cq.box_hi};
        eff["model"]["load"] = {{"kind", "linear"}, {"a", cfg.cq.load.a}, {"b", cfg.cq.load.b}};
    } else if (cfg.model_name == "marginal") {
        eff["model"]["alpha"] = cfg.mg.alpha;
        eff["model"]["mu"] = cfg.mg.mu;
        eff["model"]["full"] = cfg.marginal_full;
        eff["model"]["u0"] = cfg.u0.back();
        eff["model"]["T"] = cfg.mg.T;
        eff["model"]["box"] = {cfg.mg.box_lo, cfg.mg.box_hi};
        eff["model"]["load"] = {{"kind", "linear"}, {"a", cfg.mg.load.a}, {"b", cfg.mg.load.b}};
    } else {
        eff["model"]["nodes"] = cfg.ac.nodes;
        eff["model"]["alpha"] = cfg.ac.alpha;
        eff["model"]["mu"] = cfg.ac.mu;
        eff["model"]["u0"] = cfg.u0[0];
        eff["model"]["T"] = cfg.ac.T;
        eff["model"]["box"] = {cfg.ac.box_lo, cfg.ac.box_hi};
        eff["model"]["load"] = {{"kind", "linear"}, {"a", cfg.ac.load.a}, {"b", cfg.ac.load.b}};
    }
    eff["N"] = cfg.N;
    eff["mesh_list"] = cfg.mesh_list;
    eff["seed"] = cfg.scheme.seed;
    eff["stability_samples"] = cfg.stability_samples;
    eff["tolerances"] = {{"tol_f", cfg.scheme.stability.minimize.tol_f},
                         {"tol_x", cfg.scheme.stability.minimize.tol_x},
                         {"tol_stable", cfg.scheme.stability.tol_stable},
                         {"grid_points", cfg.scheme.stability.minimize.grid_points},
                         {"grid_points_nd", cfg.scheme.stability.minimize.grid_points_nd},
                         {"refine_iters", cfg.scheme.stability.minimize.refine_iters},
                         {"multistart", cfg.scheme.stability.minimize.multistart},
                         {"nd_line_grid", cfg.scheme.stability.minimize.nd_line_grid},
                         {"nd_sweeps", cfg.scheme.stability.minimize.nd_sweeps},
                         {"jump_threshold_factor", cfg.variation.jump_threshold_factor},
                         {"checkpoints", cfg.variation.checkpoints}};
    eff["out"] = cfg.out;
    eff["schema_version"] = 1;
    cfg.effective = std::move(eff);
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: JSON parse failed: ") + e.what());
    }
    return parse_config(doc);
}

int cmd_run(const RunConfig& config, const std::string& out_dir)
{
    const RisModel model = config.build_model();
    const scheme::Partition part = scheme::Partition::uniform(model.horizon, config.N);
    const scheme::DiscreteTrajectory traj =
        scheme::solve_incremental(model, part, config.u0, config.scheme);

    std::filesystem::create_directories(out_dir);
    write_text(std::filesystem::path(out_dir) / "effective_config.json",
               config.effective.dump(2) + "\n");

    if (!traj.valid) {
        std::fprintf(stderr,
                     "invalid run: minimizer on the search-box boundary at step %d (t = %s); "
                     "enlarge model.box\n",
                     traj.invalid_step,
                     num(traj.partition.times[static_cast<std::size_t>(traj.invalid_step)]).c_str());
        return 2;
    }

    write_text(std::filesystem::path(out_dir) / "trace.csv", trace_csv(model, traj));

    const variation::RegulatedCurve curve =
        variation::curve_from_trajectory(model, traj, config.variation);
    const variation::BalanceReport balance =
        variation::energy_balance_report(model, curve, config.variation);
    const double identity = scheme::check_discrete_energy_identity(model, traj, config.scheme);
    const scheme::DiscreteStabilityReport stab =
        scheme::check_discrete_stability(model, traj, config.stability_samples, config.scheme);
    const scheme::AprioriReport apriori = scheme::check_apriori_bounds(model, traj, config.scheme);

    ordered_json summary;
    summary["schema_version"] = 1;
    summary["model"] = model.name;
    summary["N"] = config.N;
    summary["T"] = model.horizon;
    summary["final_state"] = traj.states.back();
    summary["final_energy"] = traj.steps.empty() ? model.energy(0.0, traj.states.back())
                                                 : traj.steps.back().energy;
    summary["V_tau"] = traj.V_tau(part.steps());
    summary["W_tau"] = traj.W_tau(part.steps());
    summary["balance_max_residual"] = balance.max_residual;
    summary["balance_min_signed_defect"] = balance.min_signed_defect;
    summary["identity_max_residual"] = identity;
    summary["stability_checks"] = stab.checks;
    summary["stability_violations"] = static_cast<long long>(stab.violations.size());
    summary["apriori_envelope_ok"] = apriori.envelope_ok;
    summary["apriori_envelope_min_slack"] = apriori.envelope_min_slack;
    summary["apriori_sum_ok"] = apriori.sum_ok;
    summary["apriori_sum_slack"] = apriori.sum_slack;
    summary["jumps"] = ordered_json::array();
    for (const auto& j : curve.jumps) summary["jumps"].push_back(jump_json(model, j));
    summary["warnings"] = curve.warnings;
    summary["effective_config"] = config.effective;
    write_text(std::filesystem::path(out_dir) / "summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_refine(const RunConfig& config, const std::string& out_dir, int threads)
{
    const RisModel model = config.build_model();
    const std::vector<scheme::RefinementEntry> entries =
        scheme::refinement_study(model, config.u0, config.mesh_list, config.scheme, threads);

    std::filesystem::create_directories(out_dir);
    write_text(std::filesystem::path(out_dir) / "effective_config.json",
               config.effective.dump(2) + "\n");

    // Deviation from the finest run, sampled at each coarser run's nodes.
    const scheme::DiscreteTrajectory& finest = entries.back().trajectory;
    std::vector<double> deviation(entries.size(), 0.0);
    for (std::size_t k = 0; k + 1 < entries.size(); ++k) {
        double dev = 0.0;
        const auto& traj = entries[k].trajectory;
        for (std::size_t n = 0; n < traj.states.size(); ++n)
            dev = std::max(dev, sup_distance(traj.states[n],
                                             finest.state_at(traj.partition.times[n])));
        deviation[k] = dev;
    }

    std::string csv = "N,mesh,balance_residual,deviation_vs_finest,order\n";
    ordered_json rows = ordered_json::array();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        double order = 0.0;
        if (k + 2 < entries.size() && deviation[k + 1] > 0.0 && deviation[k] > 0.0)
            order = std::log2(deviation[k] / deviation[k + 1]);
        csv += std::to_string(entries[k].n_steps) + "," + num(entries[k].mesh) + "," +
               num(entries[k].balance_residual) + "," + num(deviation[k]) + "," + num(order) + "\n";
        ordered_json row;
        row["N"] = entries[k].n_steps;
        row["mesh"] = entries[k].mesh;
        row["balance_residual"] = entries[k].balance_residual;
        row["deviation_vs_finest"] = deviation[k];
        row["order"] = order;
        rows.push_back(row);
    }
    write_text(std::filesystem::path(out_dir) / "refine.csv", csv);

    const variation::RegulatedCurve curve =
        variation::extract_limit_curve(model, entries, config.variation);
    ordered_json summary;
    summary["schema_version"] = 1;
    summary["model"] = model.name;
    summary["meshes"] = rows;
    summary["jumps"] = ordered_json::array();
    for (const auto& j : curve.jumps) summary["jumps"].push_back(jump_json(model, j));
    summary["warnings"] = curve.warnings;
    summary["effective_config"] = config.effective;
    write_text(std::filesystem::path(out_dir) / "refine_summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_jump(const RunConfig& config, const std::string& out_dir, double t,
             const StatePoint& u_minus, const StatePoint& u_plus)
{
    const RisModel model = config.build_model();
    if (static_cast<int>(u_minus.size()) != model.dim() ||
        static_cast<int>(u_plus.size()) != model.dim())
        throw ConfigError("cmd_jump: state dimension mismatch");
    const transitions::JumpCostResult jc =
        transitions::jump_cost(model, t, u_minus, u_plus, config.variation.transitions);

    std::filesystem::create_directories(out_dir);
    std::string csv = "s";
    for (int i = 0; i < model.dim(); ++i) csv += ",theta" + std::to_string(i);
    csv += ",R\n";
    for (int k = 0; k < jc.witness.points(); ++k) {
        csv += num(jc.witness.params[static_cast<std::size_t>(k)]);
        for (double c : jc.witness.states[static_cast<std::size_t>(k)]) csv += "," + num(c);
        csv += "," + num(stability::residual(model, t, jc.witness.states[static_cast<std::size_t>(k)],
                                             config.scheme.stability)) +
               "\n";
    }
    write_text(std::filesystem::path(out_dir) / "jump_witness.csv", csv);

    ordered_json summary;
    summary["schema_version"] = 1;
    summary["t"] = t;
    summary["u_minus"] = u_minus;
    summary["u_plus"] = u_plus;
    summary["cost"] = jc.cost;
    summary["var_part"] = jc.breakdown.var_part;
    summary["gap_part"] = jc.breakdown.gap_part;
    summary["residual_part"] = jc.breakdown.residual_part;
    summary["d"] = model.dissipation(u_minus, u_plus);
    summary["energy_drop"] = model.energy(t, u_minus) - model.energy(t, u_plus);
    summary["witness_points"] = jc.witness.points();
    summary["effective_config"] = config.effective;
    write_text(std::filesystem::path(out_dir) / "jump_summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_stability(const RunConfig& config, const std::string& out_dir, int grid,
                  const std::vector<double>& times)
{
    const RisModel model = config.build_model();
    if (model.dim() != 1) throw ConfigError("cmd_stability: state grid scans support 1D models");
    if (grid < 2) throw ConfigError("cmd_stability: grid >= 2 required");
    std::vector<double> ts = times;
    if (ts.empty()) {
        for (int k = 0; k < 5; ++k) ts.push_back(model.horizon * k / 4.0);
    }

    std::filesystem::create_directories(out_dir);
    std::string csv = "t,x,R,stable\n";
    for (double t : ts) {
        for (int i = 0; i < grid; ++i) {
            const double x = model.search_box.lo[0] +
                             model.search_box.width(0) * static_cast<double>(i) / (grid - 1);
            const double R = stability::residual(model, t, state1(x), config.scheme.stability);
            csv += num(t) + "," + num(x) + "," + num(R) + "," +
                   (R <= config.scheme.stability.tol_stable ? "1" : "0") + "\n";
        }
    }
    write_text(std::filesystem::path(out_dir) / "stability.csv", csv);
    return 0;
}

int cmd_sweep(const RunConfig& config, const std::string& out_dir,
              const std::vector<double>& mu_list, int threads)
{
    if (config.model_name != "double_well")
        throw ConfigError("cmd_sweep: the mu sweep runs on the double_well model");
    if (mu_list.empty()) throw ConfigError("cmd_sweep: mu_list required");

    struct Row {
        double mu = 0.0;
        double onset_oracle = 0.0;
        double landing_first_oracle = 0.0;
        double landing_final_oracle = 0.0;
        double onset_scheme = 0.0;
        double landing_scheme = 0.0;
        double t_jump = 0.0;
        bool jump_found = false;
    };
    std::vector<Row> rows(mu_list.size());

    auto run_one = [&](std::size_t i) {
        Row row;
        row.mu = mu_list[i];
        models::DoubleWellParams p = config.dw;
        p.mu = row.mu;
        switch (p.regime()) {
            case models::Regime::supercritical: {
                const models::BranchState st = models::analytic_ve_solution_1d(p, 0.0);
                row.onset_oracle = st.u_pre;
                row.landing_first_oracle = st.u_post;
                row.landing_final_oracle = st.u_post;
                break;
            }
            case models::Regime::subcritical: {
                row.onset_oracle = models::subcritical_onset(p);
                const models::MaxwellJump mj = models::modified_maxwell_jump(p, row.onset_oracle);
                row.landing_first_oracle = mj.u_plus_first;
                row.landing_final_oracle = mj.u_plus_final;
                break;
            }
            case models::Regime::energetic: {
                // Maxwell time: the level l(t) - alpha+ = W'(onset) with equal areas.
                models::DoubleWellParams q = p;
                const RisModel m0 = models::double_well_model(q);
                const double t_maxwell = m0.horizon / 2.0;
                const auto [um, up] = models::energetic_maxwell_jump(p, t_maxwell);
                row.onset_oracle = um;
                row.landing_first_oracle = up;
                row.landing_final_oracle = up;
                break;
            }
        }
        const RisModel model = models::double_well_model(p);
        const scheme::Partition part = scheme::Partition::uniform(model.horizon, config.N);
        const scheme::DiscreteTrajectory traj =
            scheme::solve_incremental(model, part, state1(p.u0), config.scheme);
        if (!traj.valid) throw EvaluationError("cmd_sweep: invalid run (boundary minimizer)");
        const variation::RegulatedCurve curve =
            variation::curve_from_trajectory(model, traj, config.variation);
        if (!curve.jumps.empty()) {
            row.jump_found = true;
            row.onset_scheme = curve.jumps.front().u_minus[0];
            row.landing_scheme = curve.jumps.front().u_plus[0];
            row.t_jump = curve.jumps.front().t;
        }
        rows[i] = row;
    };

    if (threads <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) run_one(i);
    } else {
        std::size_t next = 0;
        while (next < rows.size()) {
            std::vector<std::future<void>> batch;
            for (int k = 0; k < threads && next < rows.size(); ++k, ++next)
                batch.push_back(std::async(std::launch::async, run_one, next));
            for (auto& f : batch) f.get();
        }
    }

    std::filesystem::create_directories(out_dir);
    std::string csv =
        "mu,onset_oracle,landing_first_oracle,landing_final_oracle,onset_scheme,landing_scheme,"
        "t_jump,jump_found\n";
    for (const Row& r : rows) {
        csv += num(r.mu) + "," + num(r.onset_oracle) + "," + num(r.landing_first_oracle) + "," +
               num(r.landing_final_oracle) + "," + num(r.onset_scheme) + "," +
               num(r.landing_scheme) + "," + num(r.t_jump) + "," + (r.jump_found ? "1" : "0") +
               "\n";
    }
    write_text(std::filesystem::path(out_dir) / "sweep.csv", csv);
    write_text(std::filesystem::path(out_dir) / "sweep_config.json",
               config.effective.dump(2) + "\n");
    return 0;
}

}  // namespace veris::cli
