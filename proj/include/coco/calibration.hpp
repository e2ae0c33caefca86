#pragma once

#include "coco/at1p.hpp"
#include "coco/bond.hpp"
#include "coco/capital.hpp"
#include "coco/market_data.hpp"
#include "coco/optim.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace coco {

/// Parameter vector layout: x = (B, H, sigma_1, ..., sigma_n).
struct Observable {
    std::string label;
    double market = 0.0;
};

struct CalibrationSpec {
    std::vector<Observable> observables;
    std::vector<double> weights;            ///< empty means 1/N each
    std::vector<std::optional<double>> fixed; ///< per parameter; empty means all free
    Box stage1;                             ///< defaults to (0,5) x (0,1)^(n+1) when empty
    AnnealOptions anneal;
    LmOptions lm;

    /// Fills defaults and checks consistency for a model with n volatility nodes.
    void finalize(std::size_t n_sigmas);
};

/// Observables computed from a candidate parameter set.
using ModelFn = std::function<std::vector<double>(const At1pParams&)>;

struct CalibrationProblem {
    CalibrationSpec spec;
    At1pParams base; ///< supplies V0, r, q and the volatility node times
    ModelFn model;
    /// Observable i (i < n) is the par spread at volatility node i; enables the bootstrap start.
    bool spreads_by_node = false;

    std::size_t dim() const { return base.vol.node_times.size() + 2; }
    At1pParams params_from(const Vector& x) const;
    Vector x_from(const At1pParams& p) const;
};

/// sum_i w_i ((model_i - market_i) / market_i)^2; +inf if the model fails at x.
double cost(const Vector& x, const CalibrationProblem& problem);
std::vector<double> relative_errors(const Vector& x, const CalibrationProblem& problem);

struct CalibrationReport {
    Vector x0;
    At1pParams p;
    double cost = 0.0;
    double stage1_cost = 0.0;
    std::vector<std::string> labels;
    std::vector<double> market;
    std::vector<double> model;
    std::vector<double> relative_errors;
    std::size_t stage1_evaluations = 0;
    int stage2_iterations = 0;
    bool converged = false;
    std::string stop_reason;
    std::vector<std::string> warnings;
};

/// Global search over the free coordinates of the stage-1 box.
Vector stage1_anneal(const CalibrationProblem& problem, std::uint64_t seed);

/// Local refinement from x0 in unconstrained coordinates (log for B and sigmas, logit for H).
/// Never returns a point costlier than x0.
CalibrationReport stage2_lm(const Vector& x0, const CalibrationProblem& problem);

/// Keeps B and H and solves sigma_1, sigma_2, ... in turn so that spread i matches its quote.
/// Nodes without a root in [1e-4, 1] keep their value. Requires spreads_by_node.
Vector bootstrap_sigmas(const Vector& x, const CalibrationProblem& problem);

/// Stage 1, then stage 2 from the annealed point and (for spread problems) from its bootstrapped
/// version; the cheaper result is returned.
CalibrationReport calibrate(const CalibrationProblem& problem, std::uint64_t seed);

/// CDS-only problem on the snapshot's quotes; node times equal the quote tenors.
CalibrationProblem cds_problem(const MarketSnapshot& snapshot, std::optional<double> fixed_B = std::nullopt,
                               std::optional<double> fixed_H = std::nullopt, int cds_refinement = 1);

/// Adds the capital-ratio and equity observables to the CDS problem. Without an equity
/// observable the problem falls back to CDS plus capital ratio and records a warning.
CalibrationProblem full_problem(const MarketSnapshot& snapshot, const CocoSpec& coco,
                                const CapitalRatioModel& capital, std::vector<std::string>* warnings = nullptr);

/// Stage 1 then stage 2 on the full problem; throws CalibrationError if the calibrated capital
/// ratio does not exceed the trigger at time 0.
CalibrationReport calibrate_full(const MarketSnapshot& snapshot, const CocoSpec& coco,
                                 const CapitalRatioModel& capital, std::uint64_t seed);

/// Model par spreads at the quote tenors.
std::vector<double> model_spreads(const At1pParams& p, const std::vector<CdsQuote>& quotes, double R,
                                  int refinement = 1);

} // namespace coco
