#ifndef VERIS_OPTIM_HPP
#define VERIS_OPTIM_HPP

#include <functional>
#include <span>
#include <vector>

#include "veris/common.hpp"

namespace veris::optim {

struct MinimizeConfig {
    int grid_points = 2048;     ///< per-coordinate lattice resolution in 1D
    int grid_points_nd = 64;    ///< per-coordinate lattice resolution, n <= 4
    int refine_iters = 60;      ///< golden-section iterations per candidate cell
    int multistart = 8;         ///< local-descent starts for n > 1
    double tol_x = 1e-10;
    double tol_f = 1e-12;
    int dim_cap = 64;
    int nd_samples = 2048;      ///< coarse sample count when a full lattice is infeasible
    int nd_line_grid = 33;      ///< line-search grid inside coordinate descent
    int nd_sweeps = 60;         ///< max coordinate-descent sweeps
};

struct MinimizeResult {
    StatePoint minimizer;
    double value = 0.0;
    std::vector<StatePoint> all_minimizers;  ///< every near-global minimizer, sorted by (value, lex)
    bool on_boundary = false;
};

/// Global minimization of a continuous objective on an interval:
/// uniform grid scan, then golden-section refinement around every
/// near-minimal grid cell. Deterministic for a fixed config; global
/// optimality holds at the configured resolution (the landscapes this
/// library feeds it are nonconvex, so grid-level globality is the point).
MinimizeResult global_minimize_1d(const std::function<double(double)>& objective, double lo,
                                  double hi, const MinimizeConfig& config);

/// Global minimization over a box: coarse lattice (or a deterministic
/// seeded sample when the lattice is infeasible), then multistart cyclic
/// coordinate descent. A heuristic for n > 1; callers restrict it to
/// convex or verified landscapes. `hints` adds warm starts (e.g. the
/// previous state of an incremental run).
MinimizeResult global_minimize_nd(const std::function<double(const StatePoint&)>& objective,
                                  const Box& box, const MinimizeConfig& config,
                                  std::span<const StatePoint> hints = {});

}  // namespace veris::optim

#endif
