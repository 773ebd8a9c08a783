#ifndef VERIS_COMMON_HPP
#define VERIS_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace veris {

/// A state is an ordered tuple of real coordinates; the dimension is
/// fixed per model and identical across all states of one run.
using StatePoint = std::vector<double>;

/// Thrown when an energy/dissipation evaluation produces NaN or infinity.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on invalid configuration (bad parameters, malformed config files).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an analytic oracle is asked about a parameter regime it
/// does not cover (e.g. the branch-following solution outside the
/// supercritical regime).
class WrongRegimeError : public std::runtime_error {
public:
    explicit WrongRegimeError(const std::string& what) : std::runtime_error(what) {}
};

inline StatePoint state1(double u) { return StatePoint{u}; }

inline bool all_finite(const StatePoint& x)
{
    for (double c : x) {
        if (!std::isfinite(c)) return false;
    }
    return true;
}

inline bool lex_less(const StatePoint& a, const StatePoint& b)
{
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

inline double sup_distance(const StatePoint& a, const StatePoint& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double v = std::abs(a[i] - b[i]);
        if (v > m) m = v;
    }
    return m;
}

/// Axis-aligned search box; the computable surrogate for the compact
/// sublevel sets the inner minimizers run over.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    Box() = default;
    Box(std::vector<double> lo_, std::vector<double> hi_) : lo(std::move(lo_)), hi(std::move(hi_))
    {
        if (lo.size() != hi.size() || lo.empty())
            throw ConfigError("Box: lo/hi must be nonempty and of equal size");
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (!(lo[i] < hi[i])) throw ConfigError("Box: lo < hi required per coordinate");
        }
    }

    static Box cube(int dim, double lo_, double hi_)
    {
        return Box(std::vector<double>(static_cast<std::size_t>(dim), lo_),
                   std::vector<double>(static_cast<std::size_t>(dim), hi_));
    }

    int dim() const { return static_cast<int>(lo.size()); }

    double width(std::size_t i) const { return hi[i] - lo[i]; }

    bool contains(const StatePoint& x, double slack = 0.0) const
    {
        if (x.size() != lo.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
        }
        return true;
    }

    StatePoint clamp(StatePoint x) const
    {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < lo[i]) x[i] = lo[i];
            if (x[i] > hi[i]) x[i] = hi[i];
        }
        return x;
    }
};

}  // namespace veris

#endif
