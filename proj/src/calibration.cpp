#include "coco/calibration.hpp"

#include "coco/cds.hpp"
#include "coco/equity.hpp"
#include "coco/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace coco {

void CalibrationSpec::finalize(std::size_t n_sigmas) {
    const std::size_t dim = n_sigmas + 2;
    if (observables.empty()) throw InvalidArgument("calibration needs at least one observable");
    std::string zero_labels;
    for (const auto& o : observables)
        if (o.market == 0.0 || !std::isfinite(o.market)) zero_labels += (zero_labels.empty() ? "" : ", ") + o.label;
    if (!zero_labels.empty())
        throw InvalidArgument("relative error undefined for observables with zero market value: " + zero_labels);
    if (weights.empty()) weights.assign(observables.size(), 1.0 / static_cast<double>(observables.size()));
    if (weights.size() != observables.size()) throw InvalidArgument("one weight per observable is required");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("calibration weights must be positive");
    if (fixed.empty()) fixed.assign(dim, std::nullopt);
    if (fixed.size() != dim) throw InvalidArgument("fixed-parameter list does not match the parameter count");
    if (stage1.lower.empty()) {
        stage1.lower.assign(dim, 0.0);
        stage1.upper.assign(dim, 1.0);
        stage1.upper[0] = 5.0;
    }
    if (stage1.dim() != dim || stage1.upper.size() != dim)
        throw InvalidArgument("stage-1 box does not match the parameter count");
    for (std::size_t i = 0; i < dim; ++i)
        if (fixed[i]) stage1.lower[i] = stage1.upper[i] = *fixed[i];
    stage1.validate();
}

At1pParams CalibrationProblem::params_from(const Vector& x) const {
    At1pParams p = base;
    p.B = x[0];
    p.H = x[1] * base.V0;
    for (std::size_t i = 0; i < p.vol.sigmas.size(); ++i) p.vol.sigmas[i] = x[i + 2];
    return p;
}

Vector CalibrationProblem::x_from(const At1pParams& p) const {
    Vector x{p.B, p.H / base.V0};
    x.insert(x.end(), p.vol.sigmas.begin(), p.vol.sigmas.end());
    return x;
}

namespace {

/// Model values at x, or nothing if the parameters are outside the model's domain.
std::optional<std::vector<double>> try_model(const Vector& x, const CalibrationProblem& problem) {
    if (!(x[0] >= 0.0) || !(x[1] > 0.0 && x[1] < 1.0)) return std::nullopt;
    for (std::size_t i = 2; i < x.size(); ++i)
        if (!(x[i] > 0.0) || !std::isfinite(x[i])) return std::nullopt;
    try {
        auto values = problem.model(problem.params_from(x));
        for (double v : values)
            if (!std::isfinite(v)) return std::nullopt;
        return values;
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::vector<double> weighted_residuals(const std::vector<double>& model, const CalibrationProblem& problem) {
    const auto& obs = problem.spec.observables;
    std::vector<double> r(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i)
        r[i] = std::sqrt(problem.spec.weights[i]) * (model[i] - obs[i].market) / obs[i].market;
    return r;
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

} // namespace

double cost(const Vector& x, const CalibrationProblem& problem) {
    const auto model = try_model(x, problem);
    if (!model) return std::numeric_limits<double>::infinity();
    double c = 0.0;
    for (double r : weighted_residuals(*model, problem)) c += r * r;
    return c;
}

std::vector<double> relative_errors(const Vector& x, const CalibrationProblem& problem) {
    const auto model = try_model(x, problem);
    if (!model) throw NumericalError("model cannot be evaluated at the calibrated point");
    std::vector<double> e(model->size());
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = ((*model)[i] - problem.spec.observables[i].market) / problem.spec.observables[i].market;
    return e;
}

Vector stage1_anneal(const CalibrationProblem& problem, std::uint64_t seed) {
    AnnealOptions options = problem.spec.anneal;
    options.seed = seed;
    return simulated_annealing([&](const Vector& x) { return cost(x, problem); }, problem.spec.stage1, options).x;
}

CalibrationReport stage2_lm(const Vector& x0, const CalibrationProblem& problem) {
    const std::size_t dim = problem.dim();
    if (x0.size() != dim) throw InvalidArgument("starting point has the wrong dimension");
    const auto& fixed = problem.spec.fixed;
    std::vector<std::size_t> free_index;
    for (std::size_t i = 0; i < dim; ++i)
        if (!fixed[i]) free_index.push_back(i);

    const double c0 = cost(x0, problem);
    if (!std::isfinite(c0)) throw CalibrationError("calibration cost is not finite at the starting point");

    auto to_x = [&](const Vector& u) {
        Vector x = x0;
        for (std::size_t i = 0; i < dim; ++i)
            if (fixed[i]) x[i] = *fixed[i];
        for (std::size_t k = 0; k < free_index.size(); ++k) {
            const std::size_t i = free_index[k];
            x[i] = i == 1 ? logistic(u[k]) : std::exp(u[k]);
        }
        return x;
    };
    Vector u0;
    for (std::size_t i : free_index) {
        if (i == 1)
            u0.push_back(std::log(x0[1] / (1.0 - x0[1])));
        else
            u0.push_back(std::log(std::max(x0[i], 1e-12)));
    }

    CalibrationReport report;
    report.x0 = x0;
    report.stage1_cost = c0;
    Vector x_final = x0;
    if (!free_index.empty()) {
        auto residuals = [&](const Vector& u) {
            const auto model = try_model(to_x(u), problem);
            if (!model) return Vector(problem.spec.observables.size(), std::numeric_limits<double>::quiet_NaN());
            return weighted_residuals(*model, problem);
        };
        // a single step in log coordinates may otherwise jump by tens of e-folds into a region
        // where the parameter no longer affects any observable
        LmOptions lm_options = problem.spec.lm;
        lm_options.max_step = std::min(lm_options.max_step, 1.0);
        LmResult lm;
        try {
            lm = levenberg_marquardt(residuals, u0, lm_options);
        } catch (const NumericalError& e) {
            throw CalibrationError(std::string("local optimisation failed: ") + e.what());
        }
        const Vector x_lm = to_x(lm.x);
        if (cost(x_lm, problem) <= c0) x_final = x_lm;
        report.stage2_iterations = lm.iterations;
        report.converged = lm.converged;
        report.stop_reason = lm.stop_reason;
    } else {
        report.converged = true;
        report.stop_reason = "no free parameters";
    }

    report.p = problem.params_from(x_final);
    report.cost = cost(x_final, problem);
    for (const auto& o : problem.spec.observables) {
        report.labels.push_back(o.label);
        report.market.push_back(o.market);
    }
    report.model = *try_model(x_final, problem);
    report.relative_errors = relative_errors(x_final, problem);
    return report;
}

Vector bootstrap_sigmas(const Vector& x, const CalibrationProblem& problem) {
    if (!problem.spreads_by_node) throw InvalidArgument("bootstrap needs one spread observable per node");
    const std::size_t n = problem.base.vol.sigmas.size();
    Vector out = x;
    for (std::size_t i = 0; i < n; ++i) {
        if (problem.spec.fixed[i + 2]) continue;
        const double target = problem.spec.observables[i].market;
        auto gap = [&](double sigma) {
            Vector y = out;
            y[i + 2] = sigma;
            const auto model = try_model(y, problem);
            return model ? (*model)[i] - target : std::numeric_limits<double>::quiet_NaN();
        };
        // first sign change on a log grid, then bisection in log sigma
        double lo = std::log(1e-4), g_lo = gap(1e-4);
        bool found = false;
        double hi = lo;
        for (int k = 1; k <= 40 && !found; ++k) {
            hi = std::log(1e-4) + k * (-std::log(1e-4)) / 40.0;
            const double g_hi = gap(std::exp(hi));
            if (std::isfinite(g_lo) && std::isfinite(g_hi) && (g_lo < 0.0) != (g_hi < 0.0)) {
                found = true;
            } else {
                lo = hi;
                g_lo = g_hi;
            }
        }
        if (!found) continue;
        for (int k = 0; k < 60; ++k) {
            const double mid = 0.5 * (lo + hi);
            const double g_mid = gap(std::exp(mid));
            if (!std::isfinite(g_mid)) break;
            if ((g_mid < 0.0) == (g_lo < 0.0)) {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
            }
        }
        out[i + 2] = std::exp(0.5 * (lo + hi));
    }
    return out;
}

CalibrationReport calibrate(const CalibrationProblem& problem, std::uint64_t seed) {
    AnnealOptions options = problem.spec.anneal;
    options.seed = seed;
    const auto s1 = simulated_annealing([&](const Vector& x) { return cost(x, problem); }, problem.spec.stage1,
                                        options);
    if (!std::isfinite(s1.cost)) throw CalibrationError("global search found no point where the model is defined");
    auto report = stage2_lm(s1.x, problem);
    if (problem.spreads_by_node) {
        // LM from an annealed point can settle where a short-tenor sigma has collapsed and its
        // spread is stuck at zero; a bootstrapped start sits next to the spread-fitting manifold.
        const Vector boot = bootstrap_sigmas(s1.x, problem);
        if (std::isfinite(cost(boot, problem))) {
            auto alt = stage2_lm(boot, problem);
            if (alt.cost < report.cost) report = std::move(alt);
        }
    }
    report.stage1_cost = s1.cost;
    report.stage1_evaluations = s1.evaluations;
    return report;
}

std::vector<double> model_spreads(const At1pParams& p, const std::vector<CdsQuote>& quotes, double R,
                                  int refinement) {
    std::vector<double> out;
    out.reserve(quotes.size());
    for (const auto& q : quotes) out.push_back(par_spread(p, CdsSchedule::regular(q.tenor_years), R, refinement));
    return out;
}

namespace {

std::string spread_label(double tenor) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "S%gY", tenor);
    return buf;
}

} // namespace

CalibrationProblem cds_problem(const MarketSnapshot& snapshot, std::optional<double> fixed_B,
                               std::optional<double> fixed_H, int cds_refinement) {
    snapshot.validate();
    CalibrationProblem problem;
    problem.base.r = snapshot.r;
    problem.base.q = snapshot.q;
    problem.base.V0 = 1.0;
    for (const auto& q : snapshot.cds_quotes) {
        problem.base.vol.node_times.push_back(q.tenor_years);
        problem.base.vol.sigmas.push_back(0.1);
        problem.spec.observables.push_back({spread_label(q.tenor_years), q.spread});
    }
    const std::size_t n = snapshot.cds_quotes.size();
    problem.spec.fixed.assign(n + 2, std::nullopt);
    problem.spec.fixed[0] = fixed_B;
    problem.spec.fixed[1] = fixed_H;
    problem.spec.finalize(n);
    problem.spreads_by_node = true;
    const auto quotes = snapshot.cds_quotes;
    const double R = snapshot.recovery_R;
    problem.model = [quotes, R, cds_refinement](const At1pParams& p) {
        return model_spreads(p, quotes, R, cds_refinement);
    };
    return problem;
}

CalibrationProblem full_problem(const MarketSnapshot& snapshot, const CocoSpec& coco,
                                const CapitalRatioModel& capital, std::vector<std::string>* warnings) {
    coco.validate();
    capital.validate();
    CalibrationProblem problem = cds_problem(snapshot);
    const double T = year_fraction(snapshot.valuation_date, coco.maturity_date);
    if (!(T > 0.0)) throw InvalidArgument("CoCo maturity must follow the valuation date");
    const bool with_equity = snapshot.has_equity();
    if (!with_equity && warnings)
        warnings->push_back("no equity observable: calibrating to CDS spreads and capital ratio only");

    problem.spec.observables.push_back({"capital_ratio", snapshot.reported_capital_ratio});
    if (with_equity) problem.spec.observables.push_back({"equity", snapshot.equity_observable});
    problem.spec.weights.clear();
    problem.spec.finalize(snapshot.cds_quotes.size());

    auto cds_model = problem.model;
    problem.model = [cds_model, capital, T, with_equity](const At1pParams& p) {
        auto values = cds_model(p);
        values.push_back(capital_ratio_proxy(capital, p.V0, barrier(p, 0.0)));
        if (with_equity) values.push_back(equity_value(p, 0.0, p.V0, T));
        return values;
    };
    return problem;
}

CalibrationReport calibrate_full(const MarketSnapshot& snapshot, const CocoSpec& coco,
                                 const CapitalRatioModel& capital, std::uint64_t seed) {
    std::vector<std::string> warnings;
    const auto problem = full_problem(snapshot, coco, capital, &warnings);
    auto report = calibrate(problem, seed);
    report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());
    const double c0 = capital.initial_ratio(report.p.V0, barrier(report.p, 0.0));
    if (!(c0 > capital.trigger_cbar)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "calibrated capital ratio %.6g does not exceed the trigger %.6g at time 0; "
                      "trigger-before-default cannot hold",
                      c0, capital.trigger_cbar);
        throw CalibrationError(buf);
    }
    return report;
}

} // namespace coco
