#include "coco/at1p.hpp"
#include "coco/errors.hpp"
#include "coco/normal.hpp"
#include "coco/rng.hpp"
#include "helpers.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <doctest.h>

#include <cmath>

using namespace coco;

TEST_CASE("normal cdf") {
    CHECK(norm_cdf(0.0) == 0.5);
    CHECK(norm_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
    CHECK(norm_cdf(-10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-12));
}

TEST_CASE("integrated variance") {
    const auto flat = VolTermStructure::flat(0.2);
    CHECK(integrated_variance(flat, 0.0, 1.0) == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(integrated_variance(flat, 0.7, 0.7) == 0.0);
    CHECK_THROWS_AS(integrated_variance(flat, 1.0, 0.5), InvalidInterval);

    // midpoint sum on a 1e-6 grid aligned with the node
    const VolTermStructure two{{1.0, 2.0}, {0.3, 0.15}};
    const double t1 = 0.3, t2 = 1.7, h = 1e-6;
    const long n = std::lround((t2 - t1) / h);
    long double sum = 0.0L;
    for (long k = 0; k < n; ++k) {
        const double t = t1 + (static_cast<double>(k) + 0.5) * h;
        const double s = t <= 1.0 ? 0.3 : 0.15;
        sum += static_cast<long double>(s) * s * h;
    }
    CHECK(std::abs(integrated_variance(two, t1, t2) - static_cast<double>(sum)) <= 1e-12);

    // the last volatility extends past the final node
    CHECK(integrated_variance(two, 2.0, 4.0) == doctest::Approx(2.0 * 0.15 * 0.15).epsilon(1e-15));
}

TEST_CASE("barrier") {
    At1pParams p;
    p.H = 0.9533;
    p.r = 0.0054;
    p.vol = VolTermStructure::flat(0.03);
    CHECK(barrier(p, 0.0) == p.H);
    CHECK(barrier(p, 1.0) == doctest::Approx(0.95846).epsilon(1e-5));

    using big = boost::multiprecision::cpp_dec_float_50;
    const auto g = testing::generic_b1();
    const double t = 4.2;
    // I(4.2) = 0.22^2 * 1 + 0.28^2 * 2 + 0.25^2 * 1.2
    const big I = big("0.0484") + big("0.0784") * 2 + big("0.0625") * big("1.2");
    const big exact = big("0.6") * boost::multiprecision::exp((big("0.0054") - big("0.01")) * big("4.2") - I);
    CHECK(testing::rel_diff(barrier(g, t), exact.convert_to<double>()) < 1e-14);
}

TEST_CASE("survival probability") {
    auto p = testing::wide_sigma_set();
    CHECK(survival_probability(p, 0.0) == 1.0);

    SUBCASE("limits") {
        At1pParams near = p;
        near.H = near.V0 * (1.0 - 1e-12);
        CHECK(survival_probability(near, 5.0) < 1e-9);
        At1pParams quiet = p;
        quiet.vol = VolTermStructure::flat(1e-9);
        CHECK(survival_probability(quiet, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
        At1pParams bad = p;
        bad.H = 1.0;
        CHECK_THROWS_AS(survival_probability(bad, 1.0), DomainError);
    }
    SUBCASE("monotone in maturity") {
        double prev = 1.0;
        for (int i = 1; i <= 50; ++i) {
            const double q = survival_probability(p, 0.2 * i);
            CHECK(q <= prev);
            CHECK(q >= 0.0);
            prev = q;
        }
    }
    SUBCASE("monotone in H and V0") {
        for (auto base : {testing::wide_sigma_set(), testing::generic_b1()}) {
            const double q0 = survival_probability(base, 5.0);
            At1pParams hi = base;
            hi.H += 0.01;
            CHECK(survival_probability(hi, 5.0) <= q0);
            At1pParams v = base;
            v.V0 += 0.01;
            CHECK(survival_probability(v, 5.0) >= q0);
        }
    }
}

namespace {

/// Continuous-monitoring survival by Brownian-bridge crossing probabilities in log(V/barrier).
std::pair<double, double> bridge_survival(const At1pParams& p, double T, int steps, std::size_t n, std::uint64_t seed) {
    const PathGrid grid(T / steps, T);
    const StepTable tab(p, grid.times());
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        NormalSource z(path_engine(seed, i, Stream::firm_value));
        double x = std::log(p.V0), w = 1.0;
        double y_prev = x - std::log(tab.barrier[0]);
        for (std::size_t k = 1; k < tab.times.size() && w > 0.0; ++k) {
            x += tab.drift[k] + tab.stdev[k] * z();
            const double y = x - std::log(tab.barrier[k]);
            if (y <= 0.0) {
                w = 0.0;
                break;
            }
            w *= 1.0 - std::exp(-2.0 * y_prev * y / (tab.stdev[k] * tab.stdev[k]));
            y_prev = y;
        }
        sum += w;
        sum2 += w * w;
    }
    const double mean = sum / n;
    return {mean, std::sqrt((sum2 / n - mean * mean) / n)};
}

} // namespace

TEST_CASE("survival closed form against bridge-corrected Monte Carlo") {
    for (auto p : {testing::wide_sigma_set(), testing::generic_b1()}) {
        const auto [mc, se] = bridge_survival(p, 5.0, 250, 100000, 11);
        CHECK(std::abs(mc - survival_probability(p, 5.0)) < 4.0 * se + 1e-12);
    }
}

TEST_CASE("path grid") {
    const PathGrid g(0.3, 1.0);
    REQUIRE(g.size() == 5);
    CHECK(g.times().back() == 1.0);
    CHECK(g.times()[3] == doctest::Approx(0.9));
    const PathGrid exact(0.25, 1.0);
    CHECK(exact.size() == 5);
    const PathGrid fine = PathGrid(0.5, 2.0).refined(10);
    CHECK(fine.size() == 41);
    CHECK(fine.times() == PathGrid(0.05, 2.0).times());
    CHECK_THROWS_AS(PathGrid(2.0, 1.0), InvalidArgument);
}

TEST_CASE("simulate_paths") {
    auto p = testing::generic_b1();
    const PathGrid grid(0.25, 5.0);

    SUBCASE("zero volatility is deterministic") {
        At1pParams q = p;
        q.vol = VolTermStructure::flat(1e-300);
        const auto e = simulate_paths(q, grid, 10, 1);
        for (std::size_t i = 0; i < e.n_paths; ++i)
            for (std::size_t k = 0; k < grid.size(); ++k)
                CHECK(e.path(i)[k] == doctest::Approx(q.V0 * std::exp((q.r - q.q) * grid.times()[k])).epsilon(1e-14));
    }
    SUBCASE("marginal law of log V_T") {
        const std::size_t n = 100000;
        const auto e = simulate_paths(p, grid, n, 5);
        double m = 0.0, m2 = 0.0, v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::log(e.path(i).back());
            m += x;
            m2 += x * x;
            v += e.path(i).back();
        }
        m /= n;
        const double var = m2 / n - m * m;
        v /= n;
        const double I = integrated_variance(p.vol, 0.0, 5.0);
        const double mean_expected = (p.r - p.q) * 5.0 - 0.5 * I;
        CHECK(std::abs(m - mean_expected) < 4.0 * std::sqrt(I / n));
        CHECK(std::abs(var - I) < 4.0 * I * std::sqrt(2.0 / (n - 1)));
        const double ev = std::exp((p.r - p.q) * 5.0);
        CHECK(std::abs(v - ev) < 3.0 * ev * std::sqrt((std::exp(I) - 1.0) / n));
    }
    SUBCASE("deterministic per seed and thread count") {
        const auto a = simulate_paths(p, grid, 9000, 42, 1);
        const auto b = simulate_paths(p, grid, 9000, 42, 4);
        CHECK(a.values == b.values);
        const auto c = simulate_paths(p, grid, 9000, 43, 1);
        CHECK(a.values != c.values);
    }
    CHECK_THROWS_AS(simulate_paths(p, grid, 0, 1), InvalidArgument);
}

TEST_CASE("first passage time") {
    auto p = testing::generic_b1();
    const PathGrid grid(0.5, 5.0);
    std::vector<double> above(grid.size(), 10.0);
    CHECK_FALSE(first_passage_time(above, grid.times(), p).has_value());

    std::vector<double> at(grid.size(), 10.0);
    at[0] = barrier(p, 0.0);
    CHECK(first_passage_time(at, grid.times(), p).value() == 0.0);

    const auto e = simulate_paths(p, grid, 500, 3);
    for (std::size_t i = 0; i < e.n_paths; ++i) {
        std::optional<double> oracle;
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (e.path(i)[k] <= barrier(p, grid.times()[k])) {
                oracle = grid.times()[k];
                break;
            }
        CHECK(first_passage_time(e.path(i), grid.times(), p) == oracle);
    }
}
