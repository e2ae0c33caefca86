#pragma once

#include "coco/at1p.hpp"
#include "coco/market_data.hpp"

#include <cmath>
#include <vector>

namespace testing {

inline coco::At1pParams wide_sigma_set() {
    coco::At1pParams p;
    p.B = 0.0;
    p.H = 0.5584;
    p.r = 0.0054;
    p.vol = {{1, 2, 3, 4, 5, 7, 10}, {0.3019, 0.1171, 0.1992, 0.1886, 0.2088, 0.1946, 0.2182}};
    return p;
}

inline coco::At1pParams generic_b1() {
    coco::At1pParams p;
    p.B = 1.0;
    p.H = 0.6;
    p.r = 0.0054;
    p.q = 0.01;
    p.vol = {{1, 3, 5}, {0.22, 0.28, 0.25}};
    return p;
}

inline coco::MarketSnapshot lloyds_snapshot() {
    coco::MarketSnapshot s;
    s.valuation_date = coco::parse_date("2010-12-15");
    s.r = 0.0054;
    s.recovery_R = 0.4;
    const double t[] = {1, 2, 3, 4, 5, 7, 10};
    const double b[] = {347.9934, 373.1248, 396.6364, 417.8327, 436.3855, 441.1132, 445.8688};
    for (int i = 0; i < 7; ++i) s.cds_quotes.push_back({t[i], b[i] / 1e4});
    s.reported_capital_ratio = 0.102;
    s.equity_observable = 0.0467;
    s.share_price = 0.66;
    return s;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace testing
