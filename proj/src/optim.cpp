#include "veris/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace veris::optim {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

struct Cand {
    double x = 0.0;
    double f = std::numeric_limits<double>::infinity();
};

double checked(double v, const char* where)
{
    if (!std::isfinite(v)) throw EvaluationError(std::string(where) + ": non-finite objective value");
    return v;
}

// Golden-section refinement on [a,b]; returns the best interior point seen.
Cand golden_refine(const std::function<double(double)>& f, double a, double b, int iters)
{
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = checked(f(c), "global_minimize_1d");
    double fd = checked(f(d), "global_minimize_1d");
    Cand best = (fc <= fd) ? Cand{c, fc} : Cand{d, fd};
    for (int it = 0; it < iters; ++it) {
        if (b - a <= 1e-14 * (1.0 + std::abs(a) + std::abs(b))) break;
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = checked(f(c), "global_minimize_1d");
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = checked(f(d), "global_minimize_1d");
        }
        const Cand cur = (fc <= fd) ? Cand{c, fc} : Cand{d, fd};
        if (cur.f < best.f) best = cur;
    }
    const double m = 0.5 * (a + b);
    const double fm = checked(f(m), "global_minimize_1d");
    if (fm < best.f) best = Cand{m, fm};

    // Parabolic polish: value comparisons saturate at sqrt(eps) around a
    // smooth minimum, so fit the vertex through three points spaced above
    // the noise floor. Rejected when it does not hold the value (kinks).
    const double w = 1e-6 * (1.0 + std::abs(best.x));
    const double fl = checked(f(best.x - w), "global_minimize_1d");
    const double fr = checked(f(best.x + w), "global_minimize_1d");
    const double denom = fl - 2.0 * best.f + fr;
    if (denom > 0.0) {
        const double vx = best.x - 0.5 * w * (fr - fl) / denom;
        if (std::abs(vx - best.x) <= w) {
            const double fv = checked(f(vx), "global_minimize_1d");
            if (fv <= best.f + 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(best.f)))
                best = Cand{vx, std::min(fv, best.f)};
        }
    }
    return best;
}

std::uint64_t sample_seed(int dim)
{
    return 0x9E3779B97F4A7C15ULL ^ (static_cast<std::uint64_t>(dim) * 0x2545F4914F6CDD1DULL);
}

}  // namespace

MinimizeResult global_minimize_1d(const std::function<double(double)>& objective, double lo,
                                  double hi, const MinimizeConfig& config)
{
    if (!(lo < hi)) throw ConfigError("global_minimize_1d: empty interval");
    const int G = std::max(3, config.grid_points);
    std::vector<double> xs(static_cast<std::size_t>(G)), fs(static_cast<std::size_t>(G));
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < G; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (G - 1);
        const double f = checked(objective(x), "global_minimize_1d");
        xs[static_cast<std::size_t>(i)] = x;
        fs[static_cast<std::size_t>(i)] = f;
        if (f < fmin) fmin = f;
        if (f > fmax) fmax = f;
    }

    // Refine every grid-local minimum whose value is close enough to the
    // grid minimum to plausibly hide the global one inside its cell.
    const double window = 2e-3 * (fmax - fmin) + 100.0 * config.tol_f;
    std::vector<Cand> cands;
    for (int i = 0; i < G; ++i) {
        const double f = fs[static_cast<std::size_t>(i)];
        const bool left_ok = (i == 0) || f <= fs[static_cast<std::size_t>(i - 1)];
        const bool right_ok = (i == G - 1) || f <= fs[static_cast<std::size_t>(i + 1)];
        if (!(left_ok && right_ok)) continue;
        if (f > fmin + window) continue;
        const double a = xs[static_cast<std::size_t>(std::max(0, i - 1))];
        const double b = xs[static_cast<std::size_t>(std::min(G - 1, i + 1))];
        Cand c = golden_refine(objective, a, b, config.refine_iters);
        if (f < c.f) c = Cand{xs[static_cast<std::size_t>(i)], f};
        cands.push_back(c);
    }

    double vstar = std::numeric_limits<double>::infinity();
    for (const Cand& c : cands)
        if (c.f < vstar) vstar = c.f;

    std::vector<Cand> near;
    for (const Cand& c : cands)
        if (c.f <= vstar + config.tol_f) near.push_back(c);
    std::sort(near.begin(), near.end(), [](const Cand& a, const Cand& b) { return a.x < b.x; });

    // Cluster by the documented radius, keep the best representative.
    const double radius = 2.0 * (hi - lo) / G;
    std::vector<Cand> reps;
    for (const Cand& c : near) {
        if (!reps.empty() && c.x - reps.back().x <= radius) {
            if (c.f < reps.back().f) reps.back() = c;
        } else {
            reps.push_back(c);
        }
    }
    std::sort(reps.begin(), reps.end(), [](const Cand& a, const Cand& b) {
        if (a.f != b.f) return a.f < b.f;
        return a.x < b.x;
    });

    MinimizeResult result;
    result.value = reps.front().f;
    result.minimizer = state1(reps.front().x);
    for (const Cand& c : reps) result.all_minimizers.push_back(state1(c.x));
    const double eps_b = std::max(config.tol_x, (hi - lo) * 1e-9);
    const double xbest = reps.front().x;
    result.on_boundary = (xbest - lo <= eps_b) || (hi - xbest <= eps_b);
    return result;
}

MinimizeResult global_minimize_nd(const std::function<double(const StatePoint&)>& objective,
                                  const Box& box, const MinimizeConfig& config,
                                  std::span<const StatePoint> hints)
{
    const int n = box.dim();
    if (n > config.dim_cap) throw ConfigError("global_minimize_nd: dimension above configured cap");
    if (n == 1) {
        auto f1 = [&](double u) { return objective(state1(u)); };
        MinimizeResult r = global_minimize_1d(f1, box.lo[0], box.hi[0], config);
        for (const StatePoint& h : hints) {
            const double fh = checked(objective(h), "global_minimize_nd");
            if (fh < r.value - config.tol_f) {
                r.value = fh;
                r.minimizer = h;
                r.all_minimizers = {h};
                const double eps_b = std::max(config.tol_x, (box.hi[0] - box.lo[0]) * 1e-9);
                r.on_boundary = (h[0] - box.lo[0] <= eps_b) || (box.hi[0] - h[0] <= eps_b);
            }
        }
        return r;
    }

    struct NdCand {
        StatePoint x;
        double f;
    };
    std::vector<NdCand> coarse;

    // Coarse pass: full lattice when affordable, seeded uniform sample otherwise.
    int g = std::max(3, config.grid_points_nd);
    if (g % 2 == 0) ++g;  // odd counts keep the box center on the lattice
    double lattice_size = 1.0;
    for (int i = 0; i < n; ++i) lattice_size *= g;
    while (lattice_size > 65536.0 && g > 3) {
        g = std::max(3, g / 2);
        if (g % 2 == 0) --g;
        lattice_size = 1.0;
        for (int i = 0; i < n; ++i) lattice_size *= g;
    }
    if (lattice_size <= 65536.0) {
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        StatePoint x(static_cast<std::size_t>(n), 0.0);
        while (true) {
            for (int i = 0; i < n; ++i)
                x[static_cast<std::size_t>(i)] =
                    box.lo[static_cast<std::size_t>(i)] +
                    box.width(static_cast<std::size_t>(i)) * static_cast<double>(idx[static_cast<std::size_t>(i)]) / (g - 1);
            coarse.push_back({x, checked(objective(x), "global_minimize_nd")});
            int k = 0;
            while (k < n) {
                if (++idx[static_cast<std::size_t>(k)] < g) break;
                idx[static_cast<std::size_t>(k)] = 0;
                ++k;
            }
            if (k == n) break;
        }
    } else {
        std::mt19937_64 rng(sample_seed(n));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        StatePoint x(static_cast<std::size_t>(n), 0.0);
        for (int s = 0; s < config.nd_samples; ++s) {
            for (int i = 0; i < n; ++i)
                x[static_cast<std::size_t>(i)] =
                    box.lo[static_cast<std::size_t>(i)] + box.width(static_cast<std::size_t>(i)) * unit(rng);
            coarse.push_back({x, checked(objective(x), "global_minimize_nd")});
        }
    }
    // Diagonal profiles: cheap structured candidates covering the
    // plateau-like minimizers a coarse lattice or sample can miss.
    {
        StatePoint x(static_cast<std::size_t>(n), 0.0);
        for (int s = 0; s < 33; ++s) {
            for (int i = 0; i < n; ++i)
                x[static_cast<std::size_t>(i)] = box.lo[static_cast<std::size_t>(i)] +
                                                 box.width(static_cast<std::size_t>(i)) * s / 32.0;
            coarse.push_back({x, checked(objective(x), "global_minimize_nd")});
        }
    }

    std::sort(coarse.begin(), coarse.end(), [](const NdCand& a, const NdCand& b) {
        if (a.f != b.f) return a.f < b.f;
        return lex_less(a.x, b.x);
    });

    // Start set: hints first, then well-separated best coarse points.
    std::vector<StatePoint> starts(hints.begin(), hints.end());
    const double sep = 2.0 / g;
    for (const NdCand& c : coarse) {
        if (static_cast<int>(starts.size()) >= config.multistart + static_cast<int>(hints.size())) break;
        bool distinct = true;
        for (const StatePoint& s : starts) {
            double nd = 0.0;
            for (int i = 0; i < n; ++i) {
                const double v = std::abs(s[static_cast<std::size_t>(i)] - c.x[static_cast<std::size_t>(i)]) /
                                 box.width(static_cast<std::size_t>(i));
                if (v > nd) nd = v;
            }
            if (nd < sep) {
                distinct = false;
                break;
            }
        }
        if (distinct) starts.push_back(c.x);
    }
    if (starts.empty()) starts.push_back(coarse.front().x);

    MinimizeConfig line_cfg = config;
    line_cfg.grid_points = config.nd_line_grid;

    std::vector<NdCand> ends;
    for (StatePoint x : starts) {
        x = box.clamp(std::move(x));
        double fx = checked(objective(x), "global_minimize_nd");
        for (int sweep = 0; sweep < config.nd_sweeps; ++sweep) {
            const double f_before = fx;
            for (int i = 0; i < n; ++i) {
                auto line = [&](double u) {
                    StatePoint y = x;
                    y[static_cast<std::size_t>(i)] = u;
                    return objective(y);
                };
                const MinimizeResult lr = global_minimize_1d(line, box.lo[static_cast<std::size_t>(i)],
                                                             box.hi[static_cast<std::size_t>(i)], line_cfg);
                if (lr.value < fx) {
                    x[static_cast<std::size_t>(i)] = lr.minimizer[0];
                    fx = lr.value;
                }
            }
            if (f_before - fx <= config.tol_f) break;
        }
        ends.push_back({x, fx});
    }

    double vstar = std::numeric_limits<double>::infinity();
    for (const NdCand& c : ends)
        if (c.f < vstar) vstar = c.f;

    std::vector<NdCand> near;
    for (const NdCand& c : ends)
        if (c.f <= vstar + config.tol_f) near.push_back(c);
    std::sort(near.begin(), near.end(), [](const NdCand& a, const NdCand& b) {
        if (a.f != b.f) return a.f < b.f;
        return lex_less(a.x, b.x);
    });

    std::vector<NdCand> reps;
    for (const NdCand& c : near) {
        bool merged = false;
        for (NdCand& r : reps) {
            double nd = 0.0;
            for (int i = 0; i < n; ++i) {
                const double v = std::abs(r.x[static_cast<std::size_t>(i)] - c.x[static_cast<std::size_t>(i)]) /
                                 box.width(static_cast<std::size_t>(i));
                if (v > nd) nd = v;
            }
            if (nd <= sep) {
                merged = true;
                break;
            }
        }
        if (!merged) reps.push_back(c);
    }

    MinimizeResult result;
    result.minimizer = reps.front().x;
    result.value = reps.front().f;
    for (const NdCand& c : reps) result.all_minimizers.push_back(c.x);
    result.on_boundary = false;
    for (int i = 0; i < n; ++i) {
        const double eps_b = std::max(config.tol_x, box.width(static_cast<std::size_t>(i)) * 1e-9);
        const double xi = result.minimizer[static_cast<std::size_t>(i)];
        if (xi - box.lo[static_cast<std::size_t>(i)] <= eps_b ||
            box.hi[static_cast<std::size_t>(i)] - xi <= eps_b) {
            result.on_boundary = true;
            break;
        }
    }
    return result;
}

}  // namespace veris::optim
