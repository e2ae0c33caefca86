#pragma once

#include "coco/dates.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace coco {

/// Future cash flows seen from a valuation date.
struct CashflowSchedule {
    std::vector<Date> dates;
    std::vector<double> times;   ///< ACT/365 from the valuation date
    std::vector<double> amounts; ///< coupon, plus notional on the last date
    double coupon_per_period = 0.0;
    double accrued = 0.0; ///< accrued coupon at the valuation date
    double previous_time = 0.0; ///< coupon date preceding the first flow (<= 0)

    double maturity() const { return times.back(); }
};

/// Coupon dates rolled back from maturity by 12/frequency months, keeping those after the
/// valuation date. Accrued interest uses actual days in the current period.
CashflowSchedule coupon_schedule(const Date& valuation, const Date& maturity, double coupon_rate, int frequency,
                                 double notional = 1.0);

struct CocoSpec {
    Date issue_date{};
    Date maturity_date{};
    double coupon_rate = 0.1104;
    int frequency = 2;
    double conversion_price = 0.59; ///< E*, currency per share
    double trigger_cbar = 0.05;
    double notional = 1.0;

    void validate() const;
    CashflowSchedule schedule(const Date& valuation) const {
        return coupon_schedule(valuation, maturity_date, coupon_rate, frequency, notional);
    }
};

struct BondSpec {
    Date maturity_date{};
    double coupon_rate = 0.065;
    int frequency = 1;
    double recovery_R = 0.0;
    double notional = 1.0;

    void validate() const;
    CashflowSchedule schedule(const Date& valuation) const {
        return coupon_schedule(valuation, maturity_date, coupon_rate, frequency, notional);
    }
};

enum class Compounding { annual, semiannual, continuous };
enum class PriceBasis { dirty, clean };

Compounding parse_compounding(std::string_view name);
std::string to_string(Compounding c);
std::string to_string(PriceBasis b);

/// Discount factor for yield y over t years.
double yield_discount(double y, double t, Compounding c);

/// Yield solving sum(CF disc(y, t)) = price (plus accrued for a clean price). Bisection on
/// [-0.5, 2] then Newton polish to |f| < 1e-12.
double ytm_from_price(double price, const CashflowSchedule& schedule, Compounding c,
                      PriceBasis basis = PriceBasis::dirty);

struct PriceYield {
    double price = 0.0;
    double ytm = 0.0;
};

struct ConventionScore {
    Compounding compounding = Compounding::continuous;
    PriceBasis basis = PriceBasis::dirty;
    std::vector<double> errors; ///< model yield minus quoted yield
    double max_abs_error = 0.0;
};

struct ConventionCheck {
    std::vector<ConventionScore> scores;
    ConventionScore selected;
};

/// Scores every compounding and price basis against quoted price/yield pairs and selects the
/// one with the smallest maximum absolute yield error.
ConventionCheck check_yield_convention(const std::vector<PriceYield>& quotes, const CashflowSchedule& schedule);

} // namespace coco
