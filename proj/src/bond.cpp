#include "coco/bond.hpp"

#include "coco/errors.hpp"

#include <algorithm>
#include <cmath>

namespace coco {

CashflowSchedule coupon_schedule(const Date& valuation, const Date& maturity, double coupon_rate, int frequency,
                                 double notional) {
    if (frequency < 1 || 12 % frequency != 0) throw InvalidArgument("coupon frequency must divide 12");
    if (!(std::chrono::sys_days{maturity} > std::chrono::sys_days{valuation}))
        throw InvalidArgument("bond maturity must follow the valuation date");
    const int months = 12 / frequency;
    CashflowSchedule s;
    s.coupon_per_period = coupon_rate / frequency * notional;
    Date d = maturity;
    int k = 0;
    std::vector<Date> dates;
    while (std::chrono::sys_days{d} > std::chrono::sys_days{valuation}) {
        dates.push_back(d);
        d = add_months(maturity, -months * ++k);
    }
    const Date previous = d;
    std::reverse(dates.begin(), dates.end());
    for (const auto& date : dates) {
        s.dates.push_back(date);
        s.times.push_back(year_fraction(valuation, date));
        s.amounts.push_back(s.coupon_per_period);
    }
    s.amounts.back() += notional;
    const double period_days = days_between(previous, dates.front());
    s.previous_time = year_fraction(valuation, previous);
    s.accrued = s.coupon_per_period * days_between(previous, valuation) / period_days;
    return s;
}

void CocoSpec::validate() const {
    if (!(coupon_rate > 0.0)) throw ValidationError("CoCo coupon rate must be positive");
    if (!(conversion_price > 0.0)) throw ValidationError("conversion price must be positive");
    if (!(trigger_cbar > 0.0 && trigger_cbar < 1.0)) throw ValidationError("trigger level must lie in (0,1)");
    if (frequency < 1 || 12 % frequency != 0) throw ValidationError("coupon frequency must divide 12");
    if (issue_date.ok() && maturity_date.ok() &&
        !(std::chrono::sys_days{maturity_date} > std::chrono::sys_days{issue_date}))
        throw ValidationError("CoCo maturity must follow issue");
}

void BondSpec::validate() const {
    if (!(coupon_rate >= 0.0)) throw ValidationError("bond coupon rate must be nonnegative");
    if (!(recovery_R >= 0.0 && recovery_R <= 1.0)) throw ValidationError("bond recovery must lie in [0,1]");
    if (frequency < 1 || 12 % frequency != 0) throw ValidationError("coupon frequency must divide 12");
}

Compounding parse_compounding(std::string_view name) {
    if (name == "annual") return Compounding::annual;
    if (name == "semiannual") return Compounding::semiannual;
    if (name == "continuous") return Compounding::continuous;
    throw InvalidArgument("unknown compounding '" + std::string(name) + "'");
}

std::string to_string(Compounding c) {
    switch (c) {
    case Compounding::annual: return "annual";
    case Compounding::semiannual: return "semiannual";
    case Compounding::continuous: return "continuous";
    }
    return "?";
}

std::string to_string(PriceBasis b) { return b == PriceBasis::dirty ? "dirty" : "clean"; }

double yield_discount(double y, double t, Compounding c) {
    switch (c) {
    case Compounding::annual: return std::pow(1.0 + y, -t);
    case Compounding::semiannual: return std::pow(1.0 + 0.5 * y, -2.0 * t);
    case Compounding::continuous: return std::exp(-y * t);
    }
    return 0.0;
}

namespace {

/// d/dy of yield_discount.
double yield_discount_dy(double y, double t, Compounding c) {
    switch (c) {
    case Compounding::annual: return -t * std::pow(1.0 + y, -t - 1.0);
    case Compounding::semiannual: return -t * std::pow(1.0 + 0.5 * y, -2.0 * t - 1.0);
    case Compounding::continuous: return -t * std::exp(-y * t);
    }
    return 0.0;
}

} // namespace

double ytm_from_price(double price, const CashflowSchedule& schedule, Compounding c, PriceBasis basis) {
    if (!(price > 0.0)) throw InvalidArgument("yield needs a positive price");
    if (schedule.times.empty()) throw InvalidArgument("yield needs at least one future cash flow");
    const double target = basis == PriceBasis::clean ? price + schedule.accrued : price;
    auto f = [&](double y) {
        double pv = 0.0;
        for (std::size_t i = 0; i < schedule.times.size(); ++i)
            pv += schedule.amounts[i] * yield_discount(y, schedule.times[i], c);
        return pv - target;
    };
    auto df = [&](double y) {
        double d = 0.0;
        for (std::size_t i = 0; i < schedule.times.size(); ++i)
            d += schedule.amounts[i] * yield_discount_dy(y, schedule.times[i], c);
        return d;
    };
    double lo = -0.5, hi = 2.0;
    double f_lo = f(lo), f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) throw NumericalError("no yield in [-0.5, 2] matches the price");
    for (int k = 0; k < 200 && hi - lo > 1e-10; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    double y = 0.5 * (lo + hi);
    double best_y = y;
    double best_f = std::abs(f(y));
    for (int k = 0; k < 50 && best_f >= 1e-12; ++k) {
        const double fy = f(y);
        const double d = df(y);
        if (d == 0.0) break;
        const double next = y - fy / d;
        if (!(next >= -0.5 && next <= 2.0)) break;
        y = next;
        const double fn = std::abs(f(y));
        if (fn < best_f) {
            best_f = fn;
            best_y = y;
        } else if (fn >= best_f && k > 3) {
            break;
        }
    }
    return best_y;
}

ConventionCheck check_yield_convention(const std::vector<PriceYield>& quotes, const CashflowSchedule& schedule) {
    if (quotes.empty()) throw InvalidArgument("convention check needs at least one price/yield pair");
    ConventionCheck out;
    for (PriceBasis basis : {PriceBasis::dirty, PriceBasis::clean}) {
        for (Compounding c : {Compounding::annual, Compounding::semiannual, Compounding::continuous}) {
            ConventionScore score{c, basis, {}, 0.0};
            for (const auto& q : quotes) {
                const double err = ytm_from_price(q.price, schedule, c, basis) - q.ytm;
                score.errors.push_back(err);
                score.max_abs_error = std::max(score.max_abs_error, std::abs(err));
            }
            out.scores.push_back(score);
        }
    }
    out.selected = *std::min_element(out.scores.begin(), out.scores.end(), [](const auto& a, const auto& b) {
        return a.max_abs_error < b.max_abs_error;
    });
    return out;
}

} // namespace coco
