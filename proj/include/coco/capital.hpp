#pragma once

#include "coco/at1p.hpp"
#include "coco/market_data.hpp"

#include <string>
#include <utility>
#include <vector>

namespace coco {

struct RegressionResult {
    std::string rating_class;
    Date date{};
    double alpha = 0.0;
    double beta = 0.0;
    std::size_t n_obs = 0;
};

/// OLS of tier-1 ratio on the asset/equity ratio A / (A - L) for one class and date.
RegressionResult ols_fit(const std::vector<BalanceSheetRecord>& records);

/// Unweighted means of alpha and beta across dates.
std::pair<double, double> average_params(const std::vector<RegressionResult>& results);

struct PanelRegression {
    std::vector<RegressionResult> by_date;
    std::vector<std::string> skipped; ///< dates without a usable design, with the reason
    double alpha_bar = 0.0;
    double beta_bar = 0.0;
};

/// One regression per balance-sheet date of the class, then the averages.
PanelRegression regress_panel(const BalanceSheetPanel& panel, const std::string& rating_class);

struct CapitalRatioModel {
    std::string rating_class;
    double alpha_bar = 0.0;
    double beta_bar = 0.0;
    double eta = 1.0;
    double trigger_cbar = 0.05;
    /// std(X_t) on the monitoring grid; filled by the engine's first pass when eta < 1.
    std::vector<double> x_std_profile;

    void validate() const;
    /// Capital ratio implied at time 0 for firm value V0 and barrier H.
    double initial_ratio(double V0, double H) const;
};

/// alpha + beta V / (V - H_t) above the barrier, 0 otherwise.
double capital_ratio_proxy(const CapitalRatioModel& model, double Vt, double Ht);

/// alpha + beta (eta X + sqrt(1 - eta^2) std(X) eps); equals the plain proxy when eta = 1.
double decorrelated_capital_ratio(const CapitalRatioModel& model, double Xt, double x_std_t, double eps);

struct XStdProfile {
    std::vector<double> times;
    std::vector<double> stdev;
    std::vector<std::string> warnings;
};

/// Cross-sectional std of X_t = V_t / (V_t - barrier(t)) over paths that have stayed above the
/// barrier on every grid date up to t. Dates with fewer than two such paths carry the last value.
XStdProfile estimate_x_std_profile(const PathEnsemble& paths, const At1pParams& p);

} // namespace coco
