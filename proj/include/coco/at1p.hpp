#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace coco {

/// Piecewise-constant volatility: sigmas[i] applies on (node_times[i-1], node_times[i]], the last
/// value extends beyond the final node.
struct VolTermStructure {
    std::vector<double> node_times;
    std::vector<double> sigmas;

    static VolTermStructure flat(double sigma) { return {{1.0}, {sigma}}; }

    void validate() const;
    double sigma_at(double t) const;
    VolTermStructure scaled(double factor) const;
};

/// Exact integral of sigma^2 over [t1, t2].
double integrated_variance(const VolTermStructure& vol, double t1, double t2);

struct At1pParams {
    double B = 0.0;
    double H = 0.5;
    double V0 = 1.0;
    VolTermStructure vol;
    double r = 0.0;
    double q = 0.0;

    void validate() const;
};

/// Safety barrier H exp((r-q)t - B * int_0^t sigma^2).
double barrier(const At1pParams& p, double t);

/// Continuously monitored Q(tau > T).
double survival_probability(const At1pParams& p, double T);

/// Monitoring dates 0, dt, 2dt, ... with the last date clamped to the horizon.
class PathGrid {
public:
    PathGrid(double dt, double horizon);

    double dt() const { return dt_; }
    double horizon() const { return horizon_; }
    const std::vector<double>& times() const { return times_; }
    std::size_t size() const { return times_.size(); }

    /// Grid whose steps are dt / factor; every factor-th point (and the horizon) lies on this grid.
    PathGrid refined(int factor) const;

private:
    double dt_;
    double horizon_;
    std::vector<double> times_;
};

/// Per-step coefficients of exact log-normal stepping over a fixed time vector.
struct StepTable {
    std::vector<double> times;
    std::vector<double> drift;   ///< (r-q)h - 0.5 * int sigma^2, entry k for step (k-1, k]; drift[0] = 0
    std::vector<double> stdev;   ///< sqrt(int sigma^2) over the same step
    std::vector<double> barrier; ///< barrier at times[k]

    StepTable(const At1pParams& p, const std::vector<double>& times);
};

/// Firm-value paths stored path-major.
struct PathEnsemble {
    std::vector<double> times;
    std::size_t n_paths = 0;
    std::vector<double> values;

    std::span<const double> path(std::size_t i) const {
        return {values.data() + i * times.size(), times.size()};
    }
};

/// Path i draws from its own stream derived from (seed, i).
PathEnsemble simulate_paths(const At1pParams& p, const PathGrid& grid, std::size_t n_paths,
                            std::uint64_t seed, unsigned threads = 0);

/// First grid time with V <= barrier, or nothing if the path never touches it.
std::optional<double> first_passage_time(std::span<const double> path, const std::vector<double>& times,
                                         const At1pParams& p);

} // namespace coco
