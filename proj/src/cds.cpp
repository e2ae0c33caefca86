#include "coco/cds.hpp"

#include "coco/errors.hpp"

#include <cmath>

namespace coco {

CdsSchedule CdsSchedule::regular(double maturity, int frequency, double T0) {
    if (frequency < 1) throw InvalidArgument("CDS frequency must be positive");
    if (!(maturity > T0)) throw InvalidArgument("CDS maturity must follow the start date");
    CdsSchedule s;
    s.T0 = T0;
    const double step = 1.0 / frequency;
    for (int k = 1;; ++k) {
        const double t = T0 + k * step;
        if (t >= maturity - 1e-10) break;
        s.payment_times.push_back(t);
    }
    s.payment_times.push_back(maturity);
    return s;
}

void CdsSchedule::validate() const {
    if (T0 < 0.0) throw InvalidArgument("CDS start must be nonnegative");
    if (payment_times.empty()) throw InvalidArgument("CDS schedule has no payment dates");
    double prev = T0;
    for (double t : payment_times) {
        if (!(t > prev)) throw InvalidArgument("CDS payment times must be strictly increasing after T0");
        prev = t;
    }
}

CdsLegs cds_legs(const At1pParams& p, const CdsSchedule& schedule, double R, int refinement) {
    if (!(R >= 0.0 && R < 1.0)) throw InvalidArgument("recovery must lie in [0,1)");
    if (refinement < 1) throw InvalidArgument("CDS refinement must be >= 1");
    schedule.validate();
    CdsLegs legs;
    double t_prev = schedule.T0;
    double q_prev = survival_probability(p, t_prev);
    for (std::size_t i = 0; i < schedule.payment_times.size(); ++i) {
        const double start = t_prev;
        const double end = schedule.payment_times[i];
        const double alpha = end - start;
        double default_mass = 0.0;
        for (int j = 1; j <= refinement; ++j) {
            const double u = (j == refinement) ? end : start + alpha * j / refinement;
            const double q_u = survival_probability(p, u);
            const double df = std::exp(-p.r * u);
            const double dq = q_prev - q_u;
            const double mid = 0.5 * (t_prev + u) - start;
            legs.risky_annuity += df * mid * dq;
            default_mass += df * dq;
            t_prev = u;
            q_prev = q_u;
        }
        legs.risky_annuity += std::exp(-p.r * end) * alpha * q_prev;
        legs.protection += (1.0 - R) * default_mass;
    }
    return legs;
}

double cds_price(const At1pParams& p, const CdsSchedule& schedule, double S, double R, int refinement) {
    const CdsLegs legs = cds_legs(p, schedule, R, refinement);
    return S * legs.risky_annuity - legs.protection;
}

double par_spread(const At1pParams& p, const CdsSchedule& schedule, double R, int refinement) {
    const CdsLegs legs = cds_legs(p, schedule, R, refinement);
    if (!(legs.risky_annuity > 0.0))
        throw DegenerateError("risky annuity is not positive; the schedule carries no survival mass");
    return legs.protection / legs.risky_annuity;
}

} // namespace coco
