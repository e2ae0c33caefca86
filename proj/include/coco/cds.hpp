#pragma once

#include "coco/at1p.hpp"

#include <vector>

namespace coco {

struct CdsSchedule {
    double T0 = 0.0;
    std::vector<double> payment_times;

    /// Regular schedule T0 + k/frequency up to maturity; a short last period ends at maturity.
    static CdsSchedule regular(double maturity, int frequency = 4, double T0 = 0.0);

    void validate() const;
    double accrual(std::size_t i) const {
        return payment_times[i] - (i == 0 ? T0 : payment_times[i - 1]);
    }
};

struct CdsLegs {
    double risky_annuity = 0.0; ///< premium leg per unit spread, half-period accrual on default
    double protection = 0.0;    ///< per unit notional, including (1 - R)
};

/// Both legs on the premium grid; `refinement` splits each premium period into that many
/// default-monitoring subperiods (1 reproduces the plain premium-grid discretisation).
CdsLegs cds_legs(const At1pParams& p, const CdsSchedule& schedule, double R, int refinement = 1);

/// Premium leg minus protection leg at time 0, per unit notional.
double cds_price(const At1pParams& p, const CdsSchedule& schedule, double S, double R, int refinement = 1);

double par_spread(const At1pParams& p, const CdsSchedule& schedule, double R, int refinement = 1);

} // namespace coco
