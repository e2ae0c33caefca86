#pragma once

#include "coco/at1p.hpp"
#include "coco/bond.hpp"
#include "coco/capital.hpp"
#include "coco/market_data.hpp"
#include "coco/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace coco {

enum class XStdMode { per_time, constant };

struct SimConfig {
    double dt = 1.0 / 500.0;      ///< monitoring step
    std::size_t n_paths = 100000;
    std::uint64_t seed = 1;
    bool antithetic = false;
    int path_refinement = 1;      ///< simulation sub-steps per monitoring step
    unsigned threads = 0;         ///< 0 = hardware concurrency
    XStdMode x_std_mode = XStdMode::per_time;
    bool accrued_at_event = false;

    void validate() const;
};

struct PriceResult {
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double std_error = 0.0;
    double ytm = 0.0; ///< continuous compounding, price taken as dirty
    std::size_t n_paths = 0;
    std::size_t n_excluded = 0;
    double dt = 0.0;
    std::size_t n_default = 0;
    std::size_t n_trigger = 0;
};

enum class PathEvent : unsigned char { none, default_event, trigger };

struct PathOutcome {
    double payoff = 0.0;
    double event_time = 0.0;
    double conversion_ratio = 0.0; ///< E_tau / E* on trigger, 0 otherwise
    PathEvent event = PathEvent::none;
};

/// One entry per path, in path order.
std::vector<PathOutcome> coco_path_outcomes(const At1pParams& p, const CocoSpec& coco, const CapitalRatioModel& cap,
                                            const MarketSnapshot& market, const SimConfig& sim);

/// Same cash flows as the CoCo with the trigger removed; default pays recovery R.
std::vector<PathOutcome> straight_bond_outcomes(const At1pParams& p, const CashflowSchedule& schedule,
                                                double recovery_R, const MarketSnapshot& market, const SimConfig& sim);

PriceResult summarize(const std::vector<PathOutcome>& outcomes, const CashflowSchedule& schedule, double dt);

PriceResult price_coco(const At1pParams& p, const CocoSpec& coco, const CapitalRatioModel& cap,
                       const MarketSnapshot& market, const SimConfig& sim);

PriceResult price_pdb_mc(const At1pParams& p, const BondSpec& bond, const MarketSnapshot& market,
                         const SimConfig& sim);

/// Closed-form price with zero recovery: sum CF_i D(0,t_i) Q(tau > t_i).
double price_pdb_analytic(const At1pParams& p, const BondSpec& bond, const MarketSnapshot& market);
double price_schedule_analytic(const At1pParams& p, const CashflowSchedule& schedule);

PriceResult price_coco_stripped(const At1pParams& p, const CocoSpec& coco, const MarketSnapshot& market,
                                const SimConfig& sim, double recovery_R = 0.0);

/// std(X_t) on the monitoring dates over paths not yet at or below the barrier; the first pass
/// of the CoCo engine when eta < 1.
std::vector<double> x_std_profile(const At1pParams& p, const PathGrid& grid, const SimConfig& sim);

struct SamplingRow {
    double dt = 0.0;
    double analytic = 0.0;
    PriceResult mc;
    bool pass = false;
};

struct SamplingReport {
    std::vector<SamplingRow> rows;
    double recommended_dt = 0.0; ///< coarsest passing dt, 0 if none passes
};

/// Plain bond priced with zero recovery by Monte Carlo at each dt against the closed form.
SamplingReport sampling_frequency_check(const At1pParams& p, const BondSpec& bond, const MarketSnapshot& market,
                                        const std::vector<double>& dts, const SimConfig& sim);

struct PathStatistics {
    PriceResult price;
    std::size_t n_conversions = 0;
    std::size_t n_defaults = 0;
    double mean_conversion_ratio = 0.0;
    std::vector<HistogramBin> conversion_ratio_hist;
    std::vector<HistogramBin> conversion_time_hist;
    std::vector<HistogramBin> default_time_hist;
    std::vector<std::string> warnings;
};

PathStatistics path_statistics(const At1pParams& p, const CocoSpec& coco, const CapitalRatioModel& cap,
                               const MarketSnapshot& market, const SimConfig& sim);

} // namespace coco
