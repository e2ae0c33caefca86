#include "coco/capital.hpp"

#include "coco/errors.hpp"
#include "coco/stats.hpp"

#include <algorithm>
#include <cmath>

namespace coco {

RegressionResult ols_fit(const std::vector<BalanceSheetRecord>& records) {
    if (records.size() < 2) throw InvalidArgument("OLS needs at least two records (insufficient data)");
    const std::size_t n = records.size();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = records[i].asset_equity_ratio();
        y[i] = records[i].tier1_ratio;
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); }))
        throw DegenerateError("OLS design is singular: all asset/equity ratios are equal");

    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x_mean += x[i];
        y_mean += y[i];
    }
    x_mean /= static_cast<double>(n);
    y_mean /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - x_mean) * (x[i] - x_mean);
        sxy += (x[i] - x_mean) * (y[i] - y_mean);
    }
    if (!(sxx > 0.0)) throw DegenerateError("OLS design is singular");

    RegressionResult out;
    out.rating_class = records.front().rating_class;
    out.date = records.front().date;
    out.beta = sxy / sxx;
    out.alpha = y_mean - out.beta * x_mean;
    out.n_obs = n;
    return out;
}

std::pair<double, double> average_params(const std::vector<RegressionResult>& results) {
    if (results.empty()) throw InvalidArgument("cannot average an empty set of regressions");
    double a = 0.0, b = 0.0;
    for (const auto& r : results) {
        a += r.alpha;
        b += r.beta;
    }
    const double n = static_cast<double>(results.size());
    return {a / n, b / n};
}

PanelRegression regress_panel(const BalanceSheetPanel& panel, const std::string& rating_class) {
    PanelRegression out;
    for (const auto& [date, records] : panel.by_date(rating_class)) {
        try {
            out.by_date.push_back(ols_fit(records));
        } catch (const Error& e) {
            out.skipped.push_back(format_date(date) + ": " + e.what());
        }
    }
    if (out.by_date.empty())
        throw InvalidArgument("no usable balance-sheet dates for rating class '" + rating_class + "'");
    std::tie(out.alpha_bar, out.beta_bar) = average_params(out.by_date);
    return out;
}

void CapitalRatioModel::validate() const {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0,1]");
    if (!(trigger_cbar > 0.0 && trigger_cbar < 1.0)) throw ValidationError("trigger level must lie in (0,1)");
    if (!std::isfinite(alpha_bar) || !std::isfinite(beta_bar))
        throw ValidationError("capital regression coefficients must be finite");
}

double CapitalRatioModel::initial_ratio(double V0, double H) const {
    return capital_ratio_proxy(*this, V0, H);
}

double capital_ratio_proxy(const CapitalRatioModel& model, double Vt, double Ht) {
    if (!(Ht > 0.0)) throw InvalidArgument("capital ratio proxy needs a positive barrier");
    if (!(Vt > Ht)) return 0.0;
    return model.alpha_bar + model.beta_bar * (Vt / (Vt - Ht));
}

double decorrelated_capital_ratio(const CapitalRatioModel& model, double Xt, double x_std_t, double eps) {
    if (model.eta >= 1.0) return model.alpha_bar + model.beta_bar * Xt;
    if (!(x_std_t > 0.0))
        throw DegenerateError("decorrelated capital ratio needs std(X_t) > 0 when eta < 1");
    const double e = model.eta;
    return model.alpha_bar + model.beta_bar * (e * Xt + std::sqrt(1.0 - e * e) * x_std_t * eps);
}

XStdProfile estimate_x_std_profile(const PathEnsemble& paths, const At1pParams& p) {
    const StepTable steps(p, paths.times);
    const std::size_t m = paths.times.size();
    std::vector<RunningStats> acc(m);
    for (std::size_t i = 0; i < paths.n_paths; ++i) {
        const auto path = paths.path(i);
        for (std::size_t k = 0; k < m; ++k) {
            const double h = steps.barrier[k];
            if (path[k] <= h) break;
            acc[k].add(path[k] / (path[k] - h));
        }
    }
    XStdProfile out;
    out.times = paths.times;
    out.stdev.resize(m);
    double last = 0.0;
    bool carried = false;
    for (std::size_t k = 0; k < m; ++k) {
        if (acc[k].count() >= 2) {
            last = acc[k].stdev();
        } else if (!carried) {
            out.warnings.push_back("fewer than two surviving paths from t=" + std::to_string(paths.times[k]) +
                                   "; carrying the last std(X) forward");
            carried = true;
        }
        out.stdev[k] = last;
    }
    return out;
}

} // namespace coco
