#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "veris/cli.hpp"

namespace {

std::vector<double> parse_reals(const std::string& csv)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Visco-energetic evolutions of rate-independent systems: incremental "
                 "minimization runs, refinement studies, jump costs, stability scans"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::string out_dir = "out";
    unsigned long long seed = 0;
    int threads = 1;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "override the config seed");
    app.add_option("--threads", threads, "worker threads for sweeps and refinements");

    CLI::App* run = app.add_subcommand("run", "solve the scheme and write trace + summary");
    CLI::App* refine = app.add_subcommand("refine", "refinement study over mesh_list");

    CLI::App* jump = app.add_subcommand("jump", "jump cost with witness transition dump");
    double jump_t = 0.0;
    std::string jump_minus, jump_plus;
    jump->add_option("--t", jump_t, "frozen time")->required();
    jump->add_option("--u-minus", jump_minus, "start state (comma-separated)")->required();
    jump->add_option("--u-plus", jump_plus, "end state (comma-separated)")->required();

    CLI::App* stab = app.add_subcommand("stability", "residual scan over a state grid");
    int stab_grid = 201;
    std::string stab_times;
    stab->add_option("--grid", stab_grid, "grid points");
    stab->add_option("--times", stab_times, "comma-separated times (default: 5 even)");

    CLI::App* sweep = app.add_subcommand("sweep", "mu sweep of jump onset/landing");
    std::string mu_list = "0.1,0.3333333333333333,0.5,1,2";
    sweep->add_option("--mu-list", mu_list, "comma-separated mu values");

    CLI11_PARSE(app, argc, argv);

    try {
        veris::cli::RunConfig cfg = veris::cli::load_config(config_path);
        if (seed_opt->count() > 0) {
            cfg.scheme.seed = seed;
            cfg.effective["seed"] = seed;
        }
        if (app.got_subcommand(run)) return veris::cli::cmd_run(cfg, out_dir);
        if (app.got_subcommand(refine)) return veris::cli::cmd_refine(cfg, out_dir, threads);
        if (app.got_subcommand(jump))
            return veris::cli::cmd_jump(cfg, out_dir, jump_t, parse_reals(jump_minus),
                                        parse_reals(jump_plus));
        if (app.got_subcommand(stab))
            return veris::cli::cmd_stability(cfg, out_dir, stab_grid,
                                             stab_times.empty() ? std::vector<double>{}
                                                                : parse_reals(stab_times));
        if (app.got_subcommand(sweep))
            return veris::cli::cmd_sweep(cfg, out_dir, parse_reals(mu_list), threads);
    } catch (const veris::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
