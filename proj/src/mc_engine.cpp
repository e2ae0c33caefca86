#include "coco/mc_engine.hpp"

#include "coco/equity.hpp"
#include "coco/errors.hpp"
#include "coco/parallel.hpp"
#include "coco/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coco {

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
    if (n_paths < 100) throw InvalidArgument("at least 100 paths are required");
    if (path_refinement < 1) throw InvalidArgument("path refinement must be >= 1");
}

namespace {

/// Simulation grid plus the indices of its monitoring dates (t > 0).
struct Monitoring {
    StepTable steps;
    std::vector<std::size_t> index;

    Monitoring(const At1pParams& p, double horizon, const SimConfig& sim)
        : steps(p, PathGrid(std::min(sim.dt, horizon), horizon).refined(sim.path_refinement).times()) {
        const std::size_t last = steps.times.size() - 1;
        for (std::size_t k = sim.path_refinement; k < last; k += sim.path_refinement) index.push_back(k);
        index.push_back(last);
    }
    double time(std::size_t m) const { return steps.times[index[m]]; }
    double barrier(std::size_t m) const { return steps.barrier[index[m]]; }
};

/// Walks one path over the simulation grid, calling on_date(m, V) at monitoring date m until it
/// returns true. Antithetic partners share the stream of path / 2 with mirrored draws.
template <class OnDate>
void walk_path(const Monitoring& mon, const SimConfig& sim, std::size_t path, double log_v0, OnDate&& on_date) {
    const std::uint64_t stream_id = sim.antithetic ? path / 2 : path;
    const double sign = (sim.antithetic && path % 2 == 1) ? -1.0 : 1.0;
    NormalSource z(path_engine(sim.seed, stream_id, Stream::firm_value));
    const auto& drift = mon.steps.drift;
    const auto& stdev = mon.steps.stdev;
    double x = log_v0;
    std::size_t m = 0;
    std::size_t next = mon.index[0];
    for (std::size_t k = 1; k < drift.size(); ++k) {
        x += drift[k] + sign * stdev[k] * z();
        if (k == next) {
            if (on_date(m, std::exp(x), sign)) return;
            if (++m < mon.index.size()) next = mon.index[m];
        }
    }
}

/// Discounted sum of the flows strictly before each candidate event time.
struct CouponLeg {
    const CashflowSchedule& schedule;
    double r;
    std::vector<double> cumulative; ///< cumulative[j] = PV of the first j flows

    CouponLeg(const CashflowSchedule& s, double rate) : schedule(s), r(rate), cumulative(s.times.size() + 1, 0.0) {
        for (std::size_t i = 0; i < s.times.size(); ++i)
            cumulative[i + 1] = cumulative[i] + s.amounts[i] * std::exp(-r * s.times[i]);
    }
    double all() const { return cumulative.back(); }
    double before(double tau) const {
        const auto j = std::lower_bound(schedule.times.begin(), schedule.times.end(), tau) - schedule.times.begin();
        return cumulative[static_cast<std::size_t>(j)];
    }
    /// Running coupon accrued at tau, discounted to 0.
    double accrued_at(double tau) const {
        const auto it = std::lower_bound(schedule.times.begin(), schedule.times.end(), tau);
        if (it == schedule.times.end()) return 0.0;
        const double next = *it;
        const double prev = it == schedule.times.begin() ? schedule.previous_time : *(it - 1);
        return schedule.coupon_per_period * (tau - prev) / (next - prev) * std::exp(-r * tau);
    }
};

void check_rates(const At1pParams& p, const MarketSnapshot& market) {
    if (std::abs(p.r - market.r) > 1e-14 || std::abs(p.q - market.q) > 1e-14)
        throw InvalidArgument("model parameters and market snapshot disagree on r or q");
}

} // namespace

std::vector<double> x_std_profile(const At1pParams& p, const PathGrid& grid, const SimConfig& sim) {
    SimConfig local = sim;
    local.dt = grid.dt();
    const Monitoring mon(p, grid.horizon(), local);
    const std::size_t n_dates = mon.index.size();
    std::vector<std::vector<RunningStats>> per_block(block_count(sim.n_paths));
    const double log_v0 = std::log(p.V0);
    for_each_block(sim.n_paths, sim.threads, [&](std::size_t b, std::size_t begin, std::size_t end) {
        auto& acc = per_block[b];
        acc.resize(n_dates);
        for (std::size_t i = begin; i < end; ++i) {
            walk_path(mon, local, i, log_v0, [&](std::size_t m, double V, double) {
                const double h = mon.barrier(m);
                if (V <= h) return true;
                acc[m].add(V / (V - h));
                return false;
            });
        }
    });
    std::vector<RunningStats> total(n_dates);
    for (const auto& acc : per_block)
        for (std::size_t m = 0; m < n_dates; ++m) total[m].merge(acc[m]);
    std::vector<double> out(n_dates);
    double last = 0.0;
    for (std::size_t m = 0; m < n_dates; ++m) {
        if (total[m].count() >= 2) last = total[m].stdev();
        out[m] = last;
    }
    if (sim.x_std_mode == XStdMode::constant) {
        double mean = 0.0;
        for (double s : out) mean += s;
        mean /= static_cast<double>(n_dates);
        std::fill(out.begin(), out.end(), mean);
    }
    return out;
}

std::vector<PathOutcome> coco_path_outcomes(const At1pParams& p, const CocoSpec& coco, const CapitalRatioModel& cap,
                                            const MarketSnapshot& market, const SimConfig& sim) {
    sim.validate();
    p.validate();
    coco.validate();
    cap.validate();
    check_rates(p, market);
    if (!(market.share_price > 0.0)) throw InvalidArgument("share price must be positive");
    if (!(cap.initial_ratio(p.V0, barrier(p, 0.0)) > coco.trigger_cbar))
        throw ValidationError("initial capital ratio does not exceed the trigger; trigger-before-default fails");

    const CashflowSchedule schedule = coco.schedule(market.valuation_date);
    const double T = schedule.maturity();
    const Monitoring mon(p, T, sim);
    const CouponLeg leg(schedule, p.r);
    const double f0 = equity_value(p, 0.0, p.V0, T);
    if (!(f0 > 0.0)) throw NumericalError("initial equity value is zero; conversion ratio undefined");
    const double share_scale = market.share_price / coco.conversion_price;
    const double HT = barrier(p, T);

    std::vector<double> x_std;
    const bool decorrelated = cap.eta < 1.0;
    if (decorrelated) {
        PathGrid grid(std::min(sim.dt, T), T);
        x_std = x_std_profile(p, grid, sim);
    }

    std::vector<PathOutcome> out(sim.n_paths);
    const double log_v0 = std::log(p.V0);
    for_each_block(sim.n_paths, sim.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            PathOutcome o;
            std::uint64_t stream_id = sim.antithetic ? i / 2 : i;
            NormalSource eps(path_engine(sim.seed, stream_id, Stream::capital_shock));
            walk_path(mon, sim, i, log_v0, [&](std::size_t m, double V, double sign) {
                const double t = mon.time(m);
                const double h = mon.barrier(m);
                if (V <= h) {
                    o.event = PathEvent::default_event;
                    o.event_time = t;
                    return true;
                }
                const double X = V / (V - h);
                const double c = decorrelated ? decorrelated_capital_ratio(cap, X, x_std[m], sign * eps())
                                              : cap.alpha_bar + cap.beta_bar * X;
                if (c <= coco.trigger_cbar) {
                    o.event = PathEvent::trigger;
                    o.event_time = t;
                    const double f = t < T ? equity_value(p, t, V, T) : std::max(V - HT, 0.0);
                    o.conversion_ratio = std::max(0.0, share_scale * f / f0);
                    return true;
                }
                return false;
            });
            if (o.event == PathEvent::none) {
                o.payoff = leg.all();
            } else {
                o.payoff = leg.before(o.event_time);
                if (sim.accrued_at_event) o.payoff += leg.accrued_at(o.event_time);
                if (o.event == PathEvent::trigger)
                    o.payoff += coco.notional * o.conversion_ratio * std::exp(-p.r * o.event_time);
            }
            out[i] = o;
        }
    });
    return out;
}

std::vector<PathOutcome> straight_bond_outcomes(const At1pParams& p, const CashflowSchedule& schedule,
                                                double recovery_R, const MarketSnapshot& market,
                                                const SimConfig& sim) {
    sim.validate();
    p.validate();
    check_rates(p, market);
    if (!(recovery_R >= 0.0 && recovery_R <= 1.0)) throw InvalidArgument("recovery must lie in [0,1]");
    const double T = schedule.maturity();
    const Monitoring mon(p, T, sim);
    const CouponLeg leg(schedule, p.r);
    const double notional = schedule.amounts.back() - schedule.coupon_per_period;

    std::vector<PathOutcome> out(sim.n_paths);
    const double log_v0 = std::log(p.V0);
    for_each_block(sim.n_paths, sim.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            PathOutcome o;
            walk_path(mon, sim, i, log_v0, [&](std::size_t m, double V, double) {
                if (V <= mon.barrier(m)) {
                    o.event = PathEvent::default_event;
                    o.event_time = mon.time(m);
                    return true;
                }
                return false;
            });
            if (o.event == PathEvent::none) {
                o.payoff = leg.all();
            } else {
                o.payoff = leg.before(o.event_time) + recovery_R * notional * std::exp(-p.r * o.event_time);
                if (sim.accrued_at_event) o.payoff += leg.accrued_at(o.event_time);
            }
            out[i] = o;
        }
    });
    return out;
}

PriceResult summarize(const std::vector<PathOutcome>& outcomes, const CashflowSchedule& schedule, double dt) {
    PriceResult res;
    RunningStats stats;
    for (const auto& o : outcomes) {
        if (!std::isfinite(o.payoff)) {
            ++res.n_excluded;
            continue;
        }
        stats.add(o.payoff);
        if (o.event == PathEvent::default_event) ++res.n_default;
        if (o.event == PathEvent::trigger) ++res.n_trigger;
    }
    if (res.n_excluded * 1000 > outcomes.size())
        throw NumericalError(std::to_string(res.n_excluded) + " of " + std::to_string(outcomes.size()) +
                             " paths produced non-finite payoffs");
    res.n_paths = stats.count();
    res.dt = dt;
    res.estimate = stats.mean();
    res.std_error = stats.stdev() / std::sqrt(static_cast<double>(std::max<std::size_t>(stats.count(), 1)));
    res.ci_low = res.estimate - 1.96 * res.std_error;
    res.ci_high = res.estimate + 1.96 * res.std_error;
    try {
        res.ytm = ytm_from_price(res.estimate, schedule, Compounding::continuous, PriceBasis::dirty);
    } catch (const Error&) {
        res.ytm = std::numeric_limits<double>::quiet_NaN();
    }
    return res;
}

PriceResult price_coco(const At1pParams& p, const CocoSpec& coco, const CapitalRatioModel& cap,
                       const MarketSnapshot& market, const SimConfig& sim) {
    return summarize(coco_path_outcomes(p, coco, cap, market, sim), coco.schedule(market.valuation_date), sim.dt);
}

PriceResult price_pdb_mc(const At1pParams& p, const BondSpec& bond, const MarketSnapshot& market,
                         const SimConfig& sim) {
    bond.validate();
    const auto schedule = bond.schedule(market.valuation_date);
    return summarize(straight_bond_outcomes(p, schedule, bond.recovery_R, market, sim), schedule, sim.dt);
}

double price_schedule_analytic(const At1pParams& p, const CashflowSchedule& schedule) {
    double pv = 0.0;
    for (std::size_t i = 0; i < schedule.times.size(); ++i)
        pv += schedule.amounts[i] * std::exp(-p.r * schedule.times[i]) * survival_probability(p, schedule.times[i]);
    return pv;
}

double price_pdb_analytic(const At1pParams& p, const BondSpec& bond, const MarketSnapshot& market) {
    bond.validate();
    check_rates(p, market);
    return price_schedule_analytic(p, bond.schedule(market.valuation_date));
}

PriceResult price_coco_stripped(const At1pParams& p, const CocoSpec& coco, const MarketSnapshot& market,
                                const SimConfig& sim, double recovery_R) {
    coco.validate();
    const auto schedule = coco.schedule(market.valuation_date);
    return summarize(straight_bond_outcomes(p, schedule, recovery_R, market, sim), schedule, sim.dt);
}

SamplingReport sampling_frequency_check(const At1pParams& p, const BondSpec& bond, const MarketSnapshot& market,
                                        const std::vector<double>& dts, const SimConfig& sim) {
    if (dts.empty()) throw InvalidArgument("sampling check needs at least one dt");
    BondSpec zero_recovery = bond;
    zero_recovery.recovery_R = 0.0;
    const double analytic = price_pdb_analytic(p, zero_recovery, market);
    SamplingReport report;
    for (double dt : dts) {
        SimConfig s = sim;
        s.dt = dt;
        SamplingRow row;
        row.dt = dt;
        row.analytic = analytic;
        row.mc = price_pdb_mc(p, zero_recovery, market, s);
        row.pass = row.mc.ci_low <= analytic && analytic <= row.mc.ci_high;
        if (row.pass && dt > report.recommended_dt) report.recommended_dt = dt;
        report.rows.push_back(row);
    }
    return report;
}

PathStatistics path_statistics(const At1pParams& p, const CocoSpec& coco, const CapitalRatioModel& cap,
                               const MarketSnapshot& market, const SimConfig& sim) {
    const auto outcomes = coco_path_outcomes(p, coco, cap, market, sim);
    PathStatistics stats;
    stats.price = summarize(outcomes, coco.schedule(market.valuation_date), sim.dt);
    std::vector<double> ratios, t_conv, t_def;
    for (const auto& o : outcomes) {
        if (o.event == PathEvent::trigger) {
            ratios.push_back(o.conversion_ratio);
            t_conv.push_back(o.event_time);
        } else if (o.event == PathEvent::default_event) {
            t_def.push_back(o.event_time);
        }
    }
    stats.n_conversions = ratios.size();
    stats.n_defaults = t_def.size();
    if (!ratios.empty()) {
        double sum = 0.0;
        for (double r : ratios) sum += r;
        stats.mean_conversion_ratio = sum / static_cast<double>(ratios.size());
    } else {
        stats.warnings.push_back("no conversion events; conversion histograms are empty");
    }
    if (t_def.empty()) stats.warnings.push_back("no default events; default-time histogram is empty");
    stats.conversion_ratio_hist = histogram(ratios);
    stats.conversion_time_hist = histogram(t_conv);
    stats.default_time_hist = histogram(t_def);
    return stats;
}

} // namespace coco
