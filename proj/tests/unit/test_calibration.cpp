#include "coco/calibration.hpp"
#include "coco/equity.hpp"
#include "coco/errors.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace coco;

namespace {

CalibrationProblem toy_problem(std::vector<double> market) {
    CalibrationProblem p;
    p.base.vol = {{1.0}, {0.2}};
    for (std::size_t i = 0; i < market.size(); ++i) p.spec.observables.push_back({"o" + std::to_string(i), market[i]});
    p.spec.finalize(1);
    return p;
}

CocoSpec lloyds_coco() {
    CocoSpec c;
    c.issue_date = parse_date("2009-12-01");
    c.maturity_date = parse_date("2020-03-19");
    return c;
}

CapitalRatioModel lloyds_capital() {
    CapitalRatioModel m;
    m.alpha_bar = 0.1448;
    m.beta_bar = -0.002;
    m.trigger_cbar = 0.05;
    return m;
}

/// Snapshot whose quotes, capital ratio and equity come from known parameters.
MarketSnapshot synthetic_snapshot(const At1pParams& truth, const CapitalRatioModel& cap, const CocoSpec& coco) {
    MarketSnapshot s = testing::lloyds_snapshot();
    s.r = truth.r;
    s.q = truth.q;
    const auto spreads = model_spreads(truth, s.cds_quotes, s.recovery_R);
    for (std::size_t i = 0; i < spreads.size(); ++i) s.cds_quotes[i].spread = spreads[i];
    s.reported_capital_ratio = capital_ratio_proxy(cap, truth.V0, truth.H);
    s.equity_observable = equity_value(truth, 0.0, truth.V0, year_fraction(s.valuation_date, coco.maturity_date));
    return s;
}

At1pParams synthetic_truth() {
    At1pParams p;
    p.B = 0.4;
    p.H = 0.9;
    p.r = 0.0054;
    p.vol = {{1, 2, 3, 4, 5, 7, 10}, {0.04, 0.035, 0.03, 0.033, 0.036, 0.04, 0.045}};
    return p;
}

} // namespace

TEST_CASE("cost function") {
    auto prob = toy_problem({0.5});
    prob.model = [](const At1pParams& p) { return std::vector<double>{p.H}; };
    CHECK(cost({0.0, 0.5, 0.2}, prob) == 0.0);
    CHECK(cost({0.0, 0.55, 0.2}, prob) == doctest::Approx(0.01).epsilon(1e-12));

    std::vector<double> market{1, 2, 3, 4, 5, 6, 7}, offsets{0.01, -0.02, 0.005, 0.0, 0.3, -0.1, 0.07};
    auto p7 = toy_problem(market);
    p7.model = [&](const At1pParams&) {
        std::vector<double> v;
        for (std::size_t i = 0; i < 7; ++i) v.push_back(market[i] * (1 + offsets[i]));
        return v;
    };
    long double oracle = 0;
    for (double o : offsets) oracle += o * o / 7.0L;
    CHECK(std::abs(cost({0.0, 0.5, 0.2}, p7) - static_cast<double>(oracle)) <= 1e-14);

    CalibrationSpec zero;
    zero.observables = {{"a", 1.0}, {"z", 0.0}};
    CHECK_THROWS_WITH_AS(zero.finalize(1), doctest::Contains("z"), InvalidArgument);
}

TEST_CASE("CDS-only fits with pinned barrier") {
    const auto snap = testing::lloyds_snapshot();
    for (double H : {0.5584, 0.7794}) {
        const auto report = calibrate(cds_problem(snap, 0.0, H), 1);
        for (double e : report.relative_errors) CHECK(std::abs(e) < 1e-8);
        CHECK(report.p.H == H);
        CHECK(report.p.B == 0.0);
        CHECK(report.cost <= report.stage1_cost);
    }
}

TEST_CASE("stage 2 round trip on self-generated spreads") {
    auto truth = synthetic_truth();
    truth.B = 0.0;
    MarketSnapshot snap = testing::lloyds_snapshot();
    const auto spreads = model_spreads(truth, snap.cds_quotes, snap.recovery_R);
    for (std::size_t i = 0; i < spreads.size(); ++i) snap.cds_quotes[i].spread = spreads[i];
    const auto problem = cds_problem(snap, 0.0, truth.H);
    Vector x0 = problem.x_from(truth);
    for (std::size_t i = 2; i < x0.size(); ++i) x0[i] *= 1.3;
    const auto report = stage2_lm(x0, problem);
    CHECK(report.cost < 1e-16);
    for (std::size_t i = 0; i < truth.vol.sigmas.size(); ++i)
        CHECK(std::abs(report.p.vol.sigmas[i] - truth.vol.sigmas[i]) < 1e-6);

    SUBCASE("exact start") {
        const auto fixed = stage2_lm(problem.x_from(truth), problem);
        CHECK(fixed.stage2_iterations == 0);
        CHECK(fixed.converged);
    }
}

TEST_CASE("stage 1 determinism") {
    const auto problem = cds_problem(testing::lloyds_snapshot(), 0.0, 0.6);
    CHECK(stage1_anneal(problem, 3) == stage1_anneal(problem, 3));
}

TEST_CASE("full calibration") {
    const auto coco = lloyds_coco();
    const auto cap = lloyds_capital();

    SUBCASE("synthetic recovery") {
        const auto truth = synthetic_truth();
        const auto snap = synthetic_snapshot(truth, cap, coco);
        const auto report = calibrate_full(snap, coco, cap, 1);
        CHECK(report.cost < 1e-16);
        CHECK(std::abs(report.p.B - truth.B) < 1e-4);
        CHECK(std::abs(report.p.H - truth.H) < 1e-4);
        for (std::size_t i = 0; i < truth.vol.sigmas.size(); ++i)
            CHECK(std::abs(report.p.vol.sigmas[i] - truth.vol.sigmas[i]) < 1e-4);
    }
    SUBCASE("reference market lands near B = 0, H = 0.95") {
        const auto report = calibrate_full(testing::lloyds_snapshot(), coco, cap, 1);
        CHECK(report.p.B < 0.01);
        CHECK(report.p.H == doctest::Approx(0.9533).epsilon(1e-3));
        for (double s : report.p.vol.sigmas) CHECK(s < 0.1);
    }
    SUBCASE("missing equity falls back with a warning") {
        auto snap = testing::lloyds_snapshot();
        snap.equity_observable = 0.0;
        const auto report = calibrate_full(snap, coco, cap, 1);
        CHECK(report.labels.size() == 8);
        REQUIRE_FALSE(report.warnings.empty());
        CHECK(report.warnings.front().find("equity") != std::string::npos);
    }
    SUBCASE("capital ratio at or below the trigger is rejected") {
        auto snap = testing::lloyds_snapshot();
        snap.reported_capital_ratio = 0.04;
        CHECK_THROWS_AS(calibrate_full(snap, coco, cap, 1), CalibrationError);
    }
}

TEST_CASE("bootstrap start reproduces the spreads with B and H held") {
    const auto problem = cds_problem(testing::lloyds_snapshot(), 0.0, 0.6431);
    Vector x(problem.dim(), 0.3);
    x[0] = 0.0;
    x[1] = 0.6431;
    const Vector boot = bootstrap_sigmas(x, problem);
    CHECK(boot[0] == 0.0);
    CHECK(boot[1] == 0.6431);
    for (double e : relative_errors(boot, problem)) CHECK(std::abs(e) < 1e-9);

    auto plain = toy_problem({0.5});
    plain.model = [](const At1pParams& p) { return std::vector<double>{p.H}; };
    CHECK_THROWS_AS(bootstrap_sigmas({0.0, 0.5, 0.2}, plain), InvalidArgument);
}
