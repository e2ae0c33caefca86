#include "coco/errors.hpp"
#include "coco/optim.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace coco;

namespace {

double bowl(const Vector& x) {
    return 3.0 * (x[0] - 1.7) * (x[0] - 1.7) + 10.0 * (x[1] - 0.35) * (x[1] - 0.35) +
           0.5 * (x[0] - 1.7) * (x[1] - 0.35);
}

} // namespace

TEST_CASE("annealing finds the minimum of a quadratic bowl") {
    const Box box{{0.0, 0.0}, {5.0, 1.0}};
    AnnealOptions opt;
    opt.levels = 40;
    opt.proposals_per_level = 100;
    const auto res = simulated_annealing(bowl, box, opt);

    double best = std::numeric_limits<double>::infinity();
    Vector argmin;
    for (int i = 1; i < 500; ++i)
        for (int j = 1; j < 100; ++j) {
            const Vector x{0.01 * i, 0.01 * j};
            if (bowl(x) < best) {
                best = bowl(x);
                argmin = x;
            }
        }
    CHECK(std::abs(res.x[0] - argmin[0]) <= 0.1 * argmin[0]);
    CHECK(std::abs(res.x[1] - argmin[1]) <= 0.1 * argmin[1]);
    CHECK(res.initial_temperature > 0.0);
}

TEST_CASE("annealing contract") {
    const Box box{{0.0, 0.0}, {5.0, 1.0}};
    AnnealOptions opt;
    opt.levels = 10;
    opt.seed = 5;
    const auto a = simulated_annealing(bowl, box, opt);
    const auto b = simulated_annealing(bowl, box, opt);
    CHECK(a.x == b.x);
    CHECK(a.cost == b.cost);

    // never worse than the best initial proposal: with zero levels it is that proposal
    AnnealOptions none = opt;
    none.levels = 0;
    const auto init = simulated_annealing(bowl, box, none);
    CHECK(a.cost <= init.cost);

    const Box point{{0.3, 0.4}, {0.3, 0.4}};
    const auto p = simulated_annealing(bowl, point, opt);
    CHECK(p.x == Vector{0.3, 0.4});

    const Box bad{{1.0}, {0.5}};
    CHECK_THROWS_AS(simulated_annealing(bowl, bad, opt), InvalidArgument);

    // pinned coordinates stay put
    const Box half{{0.0, 0.25}, {5.0, 0.25}};
    const auto h = simulated_annealing(bowl, half, opt);
    CHECK(h.x[1] == 0.25);
}

TEST_CASE("Levenberg-Marquardt") {
    SUBCASE("Rosenbrock residuals") {
        auto rosen = [](const Vector& x) { return Vector{10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]}; };
        const auto res = levenberg_marquardt(rosen, {-1.2, 1.0});
        CHECK(res.converged);
        CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(res.cost < 1e-16);
    }
    SUBCASE("exact start does nothing") {
        auto lin = [](const Vector& x) { return Vector{x[0] - 2.0, x[1] + 1.0}; };
        const auto res = levenberg_marquardt(lin, {2.0, -1.0});
        CHECK(res.iterations == 0);
        CHECK(res.converged);
        CHECK(res.x == Vector{2.0, -1.0});
    }
    SUBCASE("non-finite start") {
        auto nan = [](const Vector&) { return Vector{std::nan("")}; };
        CHECK_THROWS_AS(levenberg_marquardt(nan, {1.0}), NumericalError);
    }
    SUBCASE("iteration cap") {
        auto rosen = [](const Vector& x) { return Vector{10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]}; };
        LmOptions opt;
        opt.max_iterations = 2;
        const auto res = levenberg_marquardt(rosen, {-1.2, 1.0}, opt);
        CHECK_FALSE(res.converged);
        CHECK(res.iterations == 2);
    }
}

TEST_CASE("Levenberg-Marquardt step cap") {
    auto far = [](const Vector& x) { return Vector{x[0] - 30.0}; };
    LmOptions opt;
    opt.max_step = 1.0;
    const auto res = levenberg_marquardt(far, {0.0}, opt);
    CHECK(res.converged);
    CHECK(res.x[0] == doctest::Approx(30.0));
    CHECK(res.iterations >= 30);
}
