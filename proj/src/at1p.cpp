#include "coco/at1p.hpp"

#include "coco/errors.hpp"
#include "coco/normal.hpp"
#include "coco/parallel.hpp"
#include "coco/rng.hpp"

#include <algorithm>
#include <cmath>

namespace coco {

void VolTermStructure::validate() const {
    if (node_times.empty() || node_times.size() != sigmas.size())
        throw ValidationError("volatility term structure needs matching, nonempty nodes and sigmas");
    for (std::size_t i = 0; i < node_times.size(); ++i) {
        if (!(node_times[i] > 0.0) || (i > 0 && !(node_times[i] > node_times[i - 1])))
            throw ValidationError("volatility node times must be positive and strictly increasing");
        if (!(sigmas[i] > 0.0) || !std::isfinite(sigmas[i]))
            throw ValidationError("volatilities must be positive and finite");
    }
}

double VolTermStructure::sigma_at(double t) const {
    const auto it = std::lower_bound(node_times.begin(), node_times.end(), t);
    const auto i = std::min<std::size_t>(it - node_times.begin(), sigmas.size() - 1);
    return sigmas[i];
}

VolTermStructure VolTermStructure::scaled(double factor) const {
    VolTermStructure out = *this;
    for (auto& s : out.sigmas) s *= factor;
    return out;
}

double integrated_variance(const VolTermStructure& vol, double t1, double t2) {
    if (t1 < 0.0 || t2 < t1) throw InvalidInterval("integrated_variance needs 0 <= t1 <= t2");
    double total = 0.0;
    double prev = 0.0;
    const std::size_t n = vol.sigmas.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double hi = (i + 1 == n) ? t2 : std::min(vol.node_times[i], t2);
        const double lo = std::max(prev, t1);
        if (hi > lo) total += vol.sigmas[i] * vol.sigmas[i] * (hi - lo);
        prev = vol.node_times[i];
        if (prev >= t2) break;
    }
    return total;
}

void At1pParams::validate() const {
    vol.validate();
    if (!(H > 0.0)) throw ValidationError("barrier level H must be positive");
    if (!(V0 > 0.0)) throw ValidationError("V0 must be positive");
    if (!(H < V0)) throw ValidationError("barrier level H must lie below V0");
    if (!(B >= 0.0)) throw ValidationError("B must be nonnegative");
    if (!std::isfinite(r) || !std::isfinite(q)) throw ValidationError("rates must be finite");
}

double barrier(const At1pParams& p, double t) {
    if (t < 0.0) throw InvalidInterval("barrier needs t >= 0");
    return p.H * std::exp((p.r - p.q) * t - p.B * integrated_variance(p.vol, 0.0, t));
}

double survival_probability(const At1pParams& p, double T) {
    if (!(p.V0 > p.H)) throw DomainError("survival probability needs V0 > H");
    if (T < 0.0) throw InvalidInterval("survival probability needs T >= 0");
    const double v = integrated_variance(p.vol, 0.0, T);
    if (v <= 0.0) return 1.0;
    const double s = std::sqrt(v);
    const double L = std::log(p.V0 / p.H);
    const double d1 = (L + (2.0 * p.B - 1.0) / 2.0 * v) / s;
    const double d2 = d1 - 2.0 * L / s;
    const double q = norm_cdf(d1) - std::pow(p.H / p.V0, 2.0 * p.B - 1.0) * norm_cdf(d2);
    return std::clamp(q, 0.0, 1.0);
}

namespace {

std::vector<double> make_times(double dt, double horizon) {
    const double ratio = horizon / dt;
    auto n = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
    n = std::max<std::size_t>(n, 1);
    std::vector<double> times(n + 1);
    for (std::size_t k = 0; k < n; ++k) times[k] = static_cast<double>(k) * dt;
    times[n] = horizon;
    return times;
}

} // namespace

PathGrid::PathGrid(double dt, double horizon) : dt_(dt), horizon_(horizon) {
    if (!(dt > 0.0) || !(horizon > 0.0)) throw InvalidArgument("path grid needs positive dt and horizon");
    if (dt > horizon * (1.0 + 1e-12)) throw InvalidArgument("path grid needs dt <= horizon");
    times_ = make_times(dt, horizon);
}

PathGrid PathGrid::refined(int factor) const {
    if (factor < 1) throw InvalidArgument("grid refinement factor must be >= 1");
    return PathGrid(std::min(dt_ / factor, horizon_), horizon_);
}

StepTable::StepTable(const At1pParams& p, const std::vector<double>& t) : times(t) {
    const std::size_t n = t.size();
    drift.assign(n, 0.0);
    stdev.assign(n, 0.0);
    barrier.resize(n);
    double I_prev = integrated_variance(p.vol, 0.0, t.front());
    for (std::size_t k = 0; k < n; ++k) {
        const double I_k = integrated_variance(p.vol, 0.0, t[k]);
        if (k > 0) {
            const double dI = I_k - I_prev;
            drift[k] = (p.r - p.q) * (t[k] - t[k - 1]) - 0.5 * dI;
            stdev[k] = std::sqrt(std::max(dI, 0.0));
        }
        barrier[k] = p.H * std::exp((p.r - p.q) * t[k] - p.B * I_k);
        I_prev = I_k;
    }
}

PathEnsemble simulate_paths(const At1pParams& p, const PathGrid& grid, std::size_t n_paths,
                            std::uint64_t seed, unsigned threads) {
    if (n_paths == 0) throw InvalidArgument("simulate_paths needs at least one path");
    const StepTable steps(p, grid.times());
    PathEnsemble out;
    out.times = grid.times();
    out.n_paths = n_paths;
    const std::size_t m = out.times.size();
    out.values.resize(n_paths * m);
    const double log_v0 = std::log(p.V0);
    for_each_block(n_paths, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            NormalSource z(path_engine(seed, i, Stream::firm_value));
            double* row = out.values.data() + i * m;
            double x = log_v0;
            row[0] = p.V0;
            for (std::size_t k = 1; k < m; ++k) {
                x += steps.drift[k] + steps.stdev[k] * z();
                row[k] = std::exp(x);
            }
        }
    });
    return out;
}

std::optional<double> first_passage_time(std::span<const double> path, const std::vector<double>& times,
                                         const At1pParams& p) {
    if (path.size() != times.size()) throw InvalidArgument("path and grid sizes differ");
    const double A = p.r - p.q;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double h = p.H * std::exp(A * times[k] - p.B * integrated_variance(p.vol, 0.0, times[k]));
        if (path[k] <= h) return times[k];
    }
    return std::nullopt;
}

} // namespace coco
