#ifndef VERIS_CLI_HPP
#define VERIS_CLI_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "veris/models.hpp"
#include "veris/variation.hpp"

namespace veris::cli {

/// Parsed, schema-checked run configuration with every default made
/// explicit. `effective` is the canonical echo embedded in all outputs;
/// re-running from it reproduces results byte for byte.
struct RunConfig {
    nlohmann::ordered_json effective;

    std::string model_name;
    models::DoubleWellParams dw;
    models::ConvexQuadraticParams cq;
    models::MarginalModelParams mg;
    models::AllenCahnParams ac;
    bool marginal_full = false;

    StatePoint u0;
    int N = 500;
    std::vector<int> mesh_list{125, 250, 500, 1000, 2000};
    int stability_samples = 1000;

    scheme::SchemeConfig scheme;
    variation::VariationConfig variation;
    std::string out = "out";

    RisModel build_model() const;
};

RunConfig parse_config(const nlohmann::ordered_json& doc);
RunConfig load_config(const std::string& path);

/// Exit codes: 0 success, 1 config error, 2 invalid run (boundary minimizer).
int cmd_run(const RunConfig& config, const std::string& out_dir);
int cmd_refine(const RunConfig& config, const std::string& out_dir, int threads);
int cmd_jump(const RunConfig& config, const std::string& out_dir, double t,
             const StatePoint& u_minus, const StatePoint& u_plus);
int cmd_stability(const RunConfig& config, const std::string& out_dir, int grid,
                  const std::vector<double>& times);
int cmd_sweep(const RunConfig& config, const std::string& out_dir,
              const std::vector<double>& mu_list, int threads);

}  // namespace veris::cli

#endif
