#include "coco/equity.hpp"
#include "coco/errors.hpp"
#include "coco/normal.hpp"
#include "coco/rng.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace coco;

TEST_CASE("equity value boundary and limits") {
    auto p = testing::generic_b1();
    const double T = 9.3;
    CHECK(equity_value(p, 0.0, barrier(p, 0.0), T) == 0.0);
    CHECK(equity_value(p, 2.0, 0.5 * barrier(p, 2.0), T) == 0.0);
    CHECK_THROWS_AS(equity_value(p, 1.0, 1.0, 1.0), InvalidInterval);

    At1pParams quiet = p;
    quiet.vol = VolTermStructure::flat(1e-7);
    for (double V : {0.7, 1.0, 2.0}) {
        const double expected = std::exp(-p.r * T) * std::max(V * std::exp((p.r - p.q) * T) - barrier(quiet, T), 0.0);
        CHECK(equity_value(quiet, 0.0, V, T) == doctest::Approx(expected).epsilon(1e-6));
    }

    // continuity at the barrier
    double prev = 1.0;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double f = equity_value(p, 0.0, barrier(p, 0.0) * (1 + eps), T);
        CHECK(f < prev);
        prev = f;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("B = 0 gives the forward-like identity") {
    // With B = 0 the barrier grows like the forward, so the killed payoff equals V_T - H(T)
    // on every surviving path and the price collapses to V - H(t) (for q = 0).
    auto p = testing::wide_sigma_set();
    for (double V : {0.6, 1.0, 1.7})
        CHECK(equity_value(p, 0.0, V, 9.3) == doctest::Approx(V - p.H).epsilon(1e-10));
}

TEST_CASE("monotone, forward-like in the money, below the plain call") {
    for (auto p : {testing::generic_b1(), testing::wide_sigma_set()}) {
        const double T = 5.0, t = 0.5, Ht = barrier(p, t);
        double prev = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double V = Ht * (1.0 + 0.1 * i);
            const double f = equity_value(p, t, V, T);
            CHECK(f > prev);
            prev = f;
        }
        for (double m : {3.0, 4.0, 6.0}) {
            const double V = m * Ht, h = 1e-5 * V;
            const double delta = (equity_value(p, t, V + h, T) - equity_value(p, t, V - h, T)) / (2 * h);
            CHECK(delta >= 0.8);
            CHECK(delta <= 1.05);
        }
    }
}

namespace {

/// Killed-path estimate with Brownian-bridge survival weights in log(V / barrier).
std::pair<double, double> killed_call_mc(const At1pParams& p, double V0, double T, int steps, std::size_t n) {
    const PathGrid grid(T / steps, T);
    const StepTable tab(p, grid.times());
    const double D = std::exp(-p.r * T), HT = tab.barrier.back();
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        NormalSource z(path_engine(77, i, Stream::firm_value));
        double x = std::log(V0), w = 1.0, y_prev = x - std::log(tab.barrier[0]);
        for (std::size_t k = 1; k < tab.times.size(); ++k) {
            x += tab.drift[k] + tab.stdev[k] * z();
            const double y = x - std::log(tab.barrier[k]);
            if (y <= 0.0) {
                w = 0.0;
                break;
            }
            w *= 1.0 - std::exp(-2.0 * y_prev * y / (tab.stdev[k] * tab.stdev[k]));
            y_prev = y;
        }
        const double pay = D * std::max(std::exp(x) - HT, 0.0) * w;
        s += pay;
        s2 += pay * pay;
    }
    const double m = s / n;
    return {m, std::sqrt((s2 / n - m * m) / n)};
}

} // namespace

TEST_CASE("closed form against killed-path Monte Carlo") {
    auto p = testing::generic_b1();
    for (double V : {0.62, 1.0}) {
        const auto [mc, se] = killed_call_mc(p, V, 5.0, 250, 60000);
        CHECK(std::abs(equity_value(p, 0.0, V, 5.0) - mc) < 4.0 * se);
    }
}

TEST_CASE("equity profiles") {
    auto p = testing::generic_b1();
    const double T = 9.3;
    std::vector<double> grid;
    for (int i = 1; i <= 30; ++i) grid.push_back(0.05 * i);
    ProfileOptions opt;
    opt.mc_paths = 50000;
    const auto a = equity_profile(p, grid, T, EquityVariant::bs_fixed_strike, opt);
    const auto b = equity_profile(p, grid, T, EquityVariant::bs_moving_strike, opt);
    const auto c = equity_profile(p, grid, T, EquityVariant::at1p_dao_call, opt);
    const auto d = equity_profile(p, grid, T, EquityVariant::at1p_plain_call, opt);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a[i].V == grid[i]);
        if (grid[i] <= p.H) CHECK(c[i].price == 0.0);
        CHECK(d[i].price + 3.0 * d[i].stderr_ >= c[i].price);
    }
    const std::vector<double> tiny{1e-8};
    for (auto v : {EquityVariant::bs_fixed_strike, EquityVariant::bs_moving_strike, EquityVariant::at1p_dao_call,
                   EquityVariant::at1p_plain_call})
        CHECK(equity_profile(p, tiny, T, v, opt)[0].price < 1e-12);
    CHECK_THROWS_AS(parse_equity_variant("asian"), InvalidArgument);
    CHECK(parse_equity_variant("at1p_dao_call") == EquityVariant::at1p_dao_call);
    CHECK_THROWS_AS(equity_profile(p, {}, T, EquityVariant::at1p_dao_call), InvalidArgument);
}
