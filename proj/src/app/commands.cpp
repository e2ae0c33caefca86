#include "app/commands.hpp"

#include "app/manifest.hpp"
#include "coco/calibration.hpp"
#include "coco/equity.hpp"
#include "coco/errors.hpp"
#include "coco/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <ostream>

namespace coco::app {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fixed(double v, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

class Csv {
public:
    Csv(const fs::path& path, const std::string& header) : out_(path, std::ios::binary) {
        if (!out_) throw InvalidArgument("cannot write '" + path.string() + "'");
        out_ << header << '\n';
    }
    template <class... Fields>
    void row(const Fields&... fields) {
        std::size_t i = 0;
        ((out_ << (i++ ? "," : "") << field(fields)), ...);
        out_ << '\n';
    }

private:
    static std::string field(double v) { return num(v); }
    static std::string field(const std::string& s) { return s; }
    static std::string field(const char* s) { return s; }
    static std::string field(std::size_t v) { return std::to_string(v); }
    static std::string field(int v) { return std::to_string(v); }
    std::ofstream out_;
};

/// Inputs shared by the pricing commands.
struct Context {
    const Config& config;
    const RunOptions& options;
    std::ostream& text;
    std::vector<fs::path> inputs;

    fs::path out(const std::string& file) const { return options.out_dir / file; }
    std::uint64_t calibration_seed() const {
        return static_cast<std::uint64_t>(config.get_int("calibration_seed", config.get_int("seed", 1)));
    }
};

MarketSnapshot load_snapshot(Context& ctx) {
    ctx.inputs.push_back(ctx.config.get_path("cds_quotes"));
    return snapshot_from(ctx.config);
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

/// Parameters from `params` if given, otherwise a fresh full calibration.
At1pParams obtain_params(Context& ctx, const MarketSnapshot& snap, const CocoSpec& coco,
                         const CapitalRatioModel& cap) {
    if (ctx.config.has("params")) {
        const fs::path path = ctx.config.get_path("params");
        ctx.inputs.push_back(path);
        At1pParams p = read_params(path);
        if (std::abs(p.r - snap.r) > 1e-14 || std::abs(p.q - snap.q) > 1e-14)
            throw InvalidArgument("parameter file rates differ from the configured r and q");
        return p;
    }
    const auto report = calibrate_full(snap, coco, cap, ctx.calibration_seed());
    print_warnings(report.warnings);
    return report.p;
}

void print_params(std::ostream& text, const At1pParams& p) {
    text << "parameters: B=" << fixed(p.B, 6) << " H=" << fixed(p.H, 6) << " sigma=";
    for (std::size_t i = 0; i < p.vol.sigmas.size(); ++i) text << (i ? "," : "") << fixed(p.vol.sigmas[i], 6);
    text << '\n';
}

void print_price(std::ostream& text, const std::string& label, const PriceResult& r) {
    text << label << ": " << fixed(r.estimate, 6) << "  95% CI (" << fixed(r.ci_low, 6) << "; " << fixed(r.ci_high, 6)
         << ")  YTM " << fixed(r.ytm, 6) << "  paths " << r.n_paths << "  dt " << num(r.dt) << '\n';
}

const char* kPriceHeader = "instrument,estimate,ci_low,ci_high,std_error,ytm,n_paths,n_excluded,dt,n_trigger,n_default";

void price_row(Csv& csv, const std::string& label, const PriceResult& r) {
    csv.row(label, r.estimate, r.ci_low, r.ci_high, r.std_error, r.ytm, r.n_paths, r.n_excluded, r.dt, r.n_trigger,
            r.n_default);
}

/// Runs fn(i) for i < n, at most `parallel` at a time; results keep index order.
template <class Result>
std::vector<Result> run_scenarios(std::size_t n, unsigned parallel, const std::function<Result(std::size_t)>& fn) {
    std::vector<Result> out(n);
    parallel = std::max(1u, parallel);
    for (std::size_t start = 0; start < n; start += parallel) {
        const std::size_t stop = std::min(n, start + parallel);
        if (parallel == 1) {
            out[start] = fn(start);
            continue;
        }
        std::vector<std::future<Result>> futures;
        for (std::size_t i = start; i < stop; ++i) futures.push_back(std::async(std::launch::async, fn, i));
        for (std::size_t i = start; i < stop; ++i) out[i] = futures[i - start].get();
    }
    return out;
}

void cmd_calibrate(Context& ctx) {
    const MarketSnapshot snap = load_snapshot(ctx);
    const std::string mode = ctx.config.get_string("calibration", "full");
    CalibrationReport report;
    if (mode == "full") {
        report = calibrate_full(snap, coco_from(ctx.config), capital_from(ctx.config), ctx.calibration_seed());
    } else if (mode == "cds") {
        std::optional<double> B, H;
        if (ctx.config.has("fixed_B")) B = ctx.config.require_double("fixed_B");
        if (ctx.config.has("fixed_H")) H = ctx.config.require_double("fixed_H");
        const auto problem = cds_problem(snap, B, H, static_cast<int>(ctx.config.get_int("cds_refinement", 1)));
        report = calibrate(problem, ctx.calibration_seed());
    } else {
        throw InvalidArgument("calibration must be 'full' or 'cds'");
    }
    print_warnings(report.warnings);

    auto& t = ctx.text;
    t << "calibration (" << mode << ")\n";
    print_params(t, report.p);
    t << "cost: stage 1 " << num(report.stage1_cost) << "  final " << num(report.cost) << "  (" << report.stop_reason
      << ", " << report.stage2_iterations << " iterations, " << (report.converged ? "converged" : "NOT converged")
      << ")\n";
    t << "observable        market          model     rel.error\n";
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
        char line[160];
        std::snprintf(line, sizeof line, "%-12s %12.8f %14.8f %13.3e\n", report.labels[i].c_str(), report.market[i],
                      report.model[i], report.relative_errors[i]);
        t << line;
    }
    std::ofstream params(ctx.out("params.txt"), std::ios::binary);
    write_params(params, report.p);
    if (!report.converged) throw CalibrationError("local optimisation did not converge: " + report.stop_reason);
    if (ctx.options.csv) {
        Csv csv(ctx.out("calibration.csv"), "observable,market,model,relative_error");
        for (std::size_t i = 0; i < report.labels.size(); ++i)
            csv.row(report.labels[i], report.market[i], report.model[i], report.relative_errors[i]);
    }
}

void cmd_price_coco(Context& ctx) {
    const MarketSnapshot snap = load_snapshot(ctx);
    const CocoSpec coco = coco_from(ctx.config);
    const CapitalRatioModel cap = capital_from(ctx.config);
    const SimConfig sim = sim_from(ctx.config);
    const At1pParams p = obtain_params(ctx, snap, coco, cap);
    print_params(ctx.text, p);
    const PriceResult r = price_coco(p, coco, cap, snap, sim);
    print_price(ctx.text, "coco", r);
    ctx.text << "events: trigger " << r.n_trigger << "  default " << r.n_default << '\n';
    if (ctx.options.csv) {
        Csv csv(ctx.out("price.csv"), kPriceHeader);
        price_row(csv, "coco", r);
    }
}

void cmd_price_pdb(Context& ctx) {
    const MarketSnapshot snap = load_snapshot(ctx);
    const BondSpec bond = pdb_from(ctx.config);
    const SimConfig sim = sim_from(ctx.config);
    const At1pParams p = obtain_params(ctx, snap, coco_from(ctx.config), capital_from(ctx.config));
    print_params(ctx.text, p);
    const PriceResult r = price_pdb_mc(p, bond, snap, sim);
    BondSpec zero = bond;
    zero.recovery_R = 0.0;
    const double analytic = price_pdb_analytic(p, zero, snap);
    print_price(ctx.text, "pdb", r);
    ctx.text << "closed form (zero recovery): " << fixed(analytic, 6) << '\n';
    if (ctx.options.csv) {
        Csv csv(ctx.out("price.csv"), kPriceHeader);
        price_row(csv, "pdb", r);
        Csv a(ctx.out("pdb_analytic.csv"), "instrument,price");
        a.row("pdb_zero_recovery", analytic);
    }
}

void cmd_price_stripped(Context& ctx) {
    const MarketSnapshot snap = load_snapshot(ctx);
    const CocoSpec coco = coco_from(ctx.config);
    const CapitalRatioModel cap = capital_from(ctx.config);
    const SimConfig sim = sim_from(ctx.config);
    const At1pParams p = obtain_params(ctx, snap, coco, cap);
    print_params(ctx.text, p);
    const double R = ctx.config.get_double("stripped_recovery", 0.0);
    const PriceResult stripped = price_coco_stripped(p, coco, snap, sim, R);
    print_price(ctx.text, "coco without conversion", stripped);
    if (ctx.options.csv) {
        Csv csv(ctx.out("price.csv"), kPriceHeader);
        price_row(csv, "coco_stripped", stripped);
    }
}

void cmd_regress(Context& ctx) {
    const fs::path path = ctx.config.get_path("balance_sheet");
    ctx.inputs.push_back(path);
    const BalanceSheetPanel panel = load_balance_sheet_panel(path);
    std::vector<std::string> classes;
    if (ctx.config.has("rating_class"))
        classes.push_back(ctx.config.require_string("rating_class"));
    else
        classes = panel.rating_classes();

    auto& t = ctx.text;
    t << "records admitted " << panel.records.size() << ", rejected " << panel.rejects.size() << '\n';
    for (const auto& r : panel.rejects)
        t << "  rejected line " << r.line << " (" << r.record.entity_id << "): " << r.reason << '\n';
    std::vector<PanelRegression> results;
    for (const auto& cls : classes) {
        results.push_back(regress_panel(panel, cls));
        const auto& res = results.back();
        t << "class " << cls << '\n';
        for (const auto& r : res.by_date)
            t << "  " << format_date(r.date) << "  alpha " << fixed(r.alpha, 6) << "  beta " << fixed(r.beta, 6)
              << "  n " << r.n_obs << '\n';
        for (const auto& s : res.skipped) t << "  skipped " << s << '\n';
        t << "  average alpha " << fixed(res.alpha_bar, 6) << "  beta " << fixed(res.beta_bar, 6) << '\n';
    }
    Csv series(ctx.out("regression.csv"), "rating_class,date,alpha,beta,n_obs");
    Csv summary(ctx.out("regression_summary.csv"), "rating_class,alpha_bar,beta_bar,n_dates");
    for (std::size_t i = 0; i < classes.size(); ++i) {
        for (const auto& r : results[i].by_date) series.row(classes[i], format_date(r.date), r.alpha, r.beta, r.n_obs);
        summary.row(classes[i], results[i].alpha_bar, results[i].beta_bar, results[i].by_date.size());
    }
    Csv rejects(ctx.out("rejects.csv"), "line,entity_id,date,reason");
    for (const auto& r : panel.rejects) rejects.row(r.line, r.record.entity_id, format_date(r.record.date), r.reason);
}

struct ScenarioOutcome {
    bool ok = false;
    std::string error;
    At1pParams p;
    PriceResult price;
};

ScenarioOutcome calibrate_and_price(const MarketSnapshot& snap, const CocoSpec& coco, const CapitalRatioModel& cap,
                                    const SimConfig& sim, std::uint64_t seed) {
    ScenarioOutcome o;
    try {
        const auto report = calibrate_full(snap, coco, cap, seed);
        o.p = report.p;
        o.price = price_coco(o.p, coco, cap, snap, sim);
        o.ok = true;
    } catch (const Error& e) {
        o.error = e.what();
    }
    return o;
}

void cmd_stress(Context& ctx) {
    const MarketSnapshot base = load_snapshot(ctx);
    const CocoSpec coco = coco_from(ctx.config);
    const CapitalRatioModel cap = capital_from(ctx.config);
    const SimConfig sim = sim_from(ctx.config);
    const auto cds_shifts = ctx.config.get_list("stress_cds_shifts", {0.10, 0.30});
    const auto equity_shifts = ctx.config.get_list("stress_equity_shifts", {-0.10, -0.30});
    if (!base.has_equity()) throw InvalidArgument("stress needs an equity observable");

    struct Scenario {
        std::string datum;
        double shift;
    };
    std::vector<Scenario> scenarios{{"base", 0.0}};
    for (double s : cds_shifts) scenarios.push_back({"cds", s});
    for (double s : equity_shifts) scenarios.push_back({"equity", s});

    const auto seed = ctx.calibration_seed();
    const auto results = run_scenarios<ScenarioOutcome>(
        scenarios.size(), ctx.options.parallel_scenarios, [&](std::size_t i) {
            MarketSnapshot snap = base;
            const auto& sc = scenarios[i];
            if (sc.datum == "cds")
                for (auto& q : snap.cds_quotes) q.spread *= 1.0 + sc.shift;
            if (sc.datum == "equity") {
                snap.equity_observable *= 1.0 + sc.shift;
                snap.share_price *= 1.0 + sc.shift;
            }
            return calibrate_and_price(snap, coco, cap, sim, seed);
        });
    if (!results[0].ok) throw CalibrationError("base scenario failed: " + results[0].error);

    auto& t = ctx.text;
    const double base_price = results[0].price.estimate;
    t << "scenario        shift      price      95% CI                    change\n";
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        char line[200];
        if (results[i].ok)
            std::snprintf(line, sizeof line, "%-10s %+9.2f%% %10.6f  (%.6f; %.6f) %+10.6f\n", scenarios[i].datum.c_str(),
                          100 * scenarios[i].shift, results[i].price.estimate, results[i].price.ci_low,
                          results[i].price.ci_high, results[i].price.estimate - base_price);
        else
            std::snprintf(line, sizeof line, "%-10s %+9.2f%% FAILED: %s\n", scenarios[i].datum.c_str(),
                          100 * scenarios[i].shift, results[i].error.c_str());
        t << line;
    }

    auto impact = [&](const std::string& datum, double magnitude) -> std::optional<double> {
        for (std::size_t i = 0; i < scenarios.size(); ++i)
            if (scenarios[i].datum == datum && std::abs(std::abs(scenarios[i].shift) - magnitude) < 1e-12 &&
                results[i].ok)
                return results[i].price.estimate - base_price;
        return std::nullopt;
    };
    t << "same-size comparison (equity fall vs CDS widening):\n";
    std::vector<std::string> checks;
    for (double s : cds_shifts) {
        const auto c = impact("cds", std::abs(s));
        const auto e = impact("equity", std::abs(s));
        if (!c || !e) continue;
        const bool dominant = std::abs(*e) > std::abs(*c);
        t << "  " << fixed(100 * std::abs(s), 0) << "%: equity " << fixed(*e, 6) << " vs CDS " << fixed(*c, 6) << " -> "
          << (dominant ? "equity move dominates" : "CDS move dominates") << '\n';
        checks.push_back(dominant ? "pass" : "fail");
    }
    if (cds_shifts.size() >= 2 && equity_shifts.size() >= 1) {
        const double small_eq = std::abs(equity_shifts.front());
        const double large_cds = std::abs(cds_shifts.back());
        const auto e = impact("equity", small_eq);
        const auto c = impact("cds", large_cds);
        if (e && c && small_eq < large_cds)
            t << "cross-size comparison (" << fixed(100 * small_eq, 0) << "% equity vs " << fixed(100 * large_cds, 0)
              << "% CDS): " << (std::abs(*e) > std::abs(*c) ? "equity" : "CDS")
              << " impact is larger; a claim that the smaller equity move outweighs the larger CDS move "
              << (std::abs(*e) > std::abs(*c) ? "holds" : "does NOT hold") << " here\n";
    }

    if (ctx.options.csv) {
        Csv csv(ctx.out("stress.csv"), "scenario,shift,status,price,ci_low,ci_high,change,B,H");
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            const auto& r = results[i];
            if (r.ok)
                csv.row(scenarios[i].datum, scenarios[i].shift, "ok", r.price.estimate, r.price.ci_low,
                        r.price.ci_high, r.price.estimate - base_price, r.p.B, r.p.H);
            else
                csv.row(scenarios[i].datum, scenarios[i].shift, "failed", "", "", "", "", "", "");
        }
        Csv dom(ctx.out("stress_dominance.csv"), "magnitude,result");
        for (std::size_t i = 0; i < checks.size(); ++i) dom.row(std::abs(cds_shifts[i]), checks[i]);
    }
}

void cmd_grid(Context& ctx) {
    const MarketSnapshot base = load_snapshot(ctx);
    const CocoSpec coco = coco_from(ctx.config);
    const CapitalRatioModel cap = capital_from(ctx.config);
    const SimConfig sim = sim_from(ctx.config);
    const auto q_multiples = ctx.config.get_list("grid_q_multiples", {3, 2, 1, 0, -1});
    const auto etas = ctx.config.get_list("grid_etas", {0, 0.25, 0.5, 0.75, 1});
    const auto seed = ctx.calibration_seed();

    struct Row {
        bool ok = false;
        std::string error;
        At1pParams p;
        std::vector<std::optional<PriceResult>> prices;
        std::vector<std::string> errors;
    };
    const auto rows = run_scenarios<Row>(q_multiples.size(), ctx.options.parallel_scenarios, [&](std::size_t i) {
        Row row;
        MarketSnapshot snap = base;
        snap.q = q_multiples[i] * base.r;
        try {
            row.p = calibrate_full(snap, coco, cap, seed).p;
            row.ok = true;
        } catch (const Error& e) {
            row.error = e.what();
            return row;
        }
        for (double eta : etas) {
            CapitalRatioModel m = cap;
            m.eta = eta;
            try {
                row.prices.emplace_back(price_coco(row.p, coco, m, snap, sim));
                row.errors.emplace_back();
            } catch (const Error& e) {
                row.prices.emplace_back(std::nullopt);
                row.errors.emplace_back(e.what());
            }
        }
        return row;
    });

    auto& t = ctx.text;
    t << "       q \\ eta";
    for (double e : etas) t << "  " << fixed(e, 2) << "    ";
    t << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        char head[64];
        std::snprintf(head, sizeof head, "%+6.2fr %8.5f", q_multiples[i], q_multiples[i] * base.r);
        t << head;
        if (!rows[i].ok) {
            t << "  calibration failed: " << rows[i].error << '\n';
            continue;
        }
        for (const auto& pr : rows[i].prices) t << "  " << (pr ? fixed(pr->estimate, 5) : std::string("failed ")) << ' ';
        t << '\n';
    }
    if (ctx.options.csv) {
        Csv csv(ctx.out("grid.csv"), "q,eta,status,price,ci_low,ci_high,ytm");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double q = q_multiples[i] * base.r;
            for (std::size_t j = 0; j < etas.size(); ++j) {
                if (rows[i].ok && rows[i].prices[j]) {
                    const auto& pr = *rows[i].prices[j];
                    csv.row(q, etas[j], "ok", pr.estimate, pr.ci_low, pr.ci_high, pr.ytm);
                } else {
                    csv.row(q, etas[j], "failed", "", "", "", "");
                }
            }
        }
    }
}

void cmd_sampling(Context& ctx) {
    const MarketSnapshot snap = load_snapshot(ctx);
    const BondSpec bond = pdb_from(ctx.config);
    const SimConfig sim = sim_from(ctx.config);
    const At1pParams p = obtain_params(ctx, snap, coco_from(ctx.config), capital_from(ctx.config));
    const auto dts = ctx.config.get_list("sampling_dts", {0.5, 0.1, 0.05, 0.01, 0.002});
    const auto report = sampling_frequency_check(p, bond, snap, dts, sim);
    auto& t = ctx.text;
    print_params(t, p);
    t << "        dt   closed form      MC price   95% CI                    result\n";
    for (const auto& row : report.rows) {
        char line[200];
        std::snprintf(line, sizeof line, "%10.6f %12.6f %12.6f  (%.6f; %.6f)  %s\n", row.dt, row.analytic,
                      row.mc.estimate, row.mc.ci_low, row.mc.ci_high, row.pass ? "pass" : "fail");
        t << line;
    }
    if (report.recommended_dt > 0.0)
        t << "coarsest passing dt: " << num(report.recommended_dt) << '\n';
    else
        t << "no dt passes\n";
    if (ctx.options.csv) {
        Csv csv(ctx.out("sampling.csv"), "dt,analytic,estimate,ci_low,ci_high,pass");
        for (const auto& row : report.rows)
            csv.row(row.dt, row.analytic, row.mc.estimate, row.mc.ci_low, row.mc.ci_high, row.pass ? "pass" : "fail");
    }
}

void write_histogram(const fs::path& path, const std::vector<HistogramBin>& bins) {
    Csv csv(path, "bin_low,bin_high,count");
    for (const auto& b : bins) csv.row(b.low, b.high, b.count);
}

void cmd_profiles(Context& ctx) {
    const MarketSnapshot snap = load_snapshot(ctx);
    const CocoSpec coco = coco_from(ctx.config);
    const CapitalRatioModel cap = capital_from(ctx.config);
    const SimConfig sim = sim_from(ctx.config);
    const At1pParams p = obtain_params(ctx, snap, coco, cap);
    const double T = year_fraction(snap.valuation_date, coco.maturity_date);

    const double v_min = ctx.config.get_double("profile_v_min", 0.5 * p.H);
    const double v_max = ctx.config.get_double("profile_v_max", 1.5 * p.V0);
    const auto n = static_cast<std::size_t>(ctx.config.get_int("profile_points", 41));
    if (!(v_min > 0.0 && v_max > v_min) || n < 2) throw InvalidArgument("profile grid needs 0 < v_min < v_max and >= 2 points");
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = v_min + (v_max - v_min) * static_cast<double>(i) / static_cast<double>(n - 1);

    ProfileOptions popt;
    popt.mc_paths = static_cast<std::size_t>(ctx.config.get_int("profile_mc_paths", 200000));
    popt.seed = sim.seed;
    const EquityVariant variants[] = {EquityVariant::bs_fixed_strike, EquityVariant::bs_moving_strike,
                                      EquityVariant::at1p_dao_call, EquityVariant::at1p_plain_call};
    std::vector<std::vector<ProfilePoint>> tables;
    for (auto v : variants) tables.push_back(equity_profile(p, grid, T, v, popt));
    {
        Csv csv(ctx.out("equity_profile.csv"),
                "V,bs_fixed_strike,bs_moving_strike,at1p_dao_call,at1p_plain_call,at1p_plain_call_se");
        for (std::size_t i = 0; i < n; ++i)
            csv.row(grid[i], tables[0][i].price, tables[1][i].price, tables[2][i].price, tables[3][i].price,
                    tables[3][i].stderr_);
    }

    const PathStatistics stats = path_statistics(p, coco, cap, snap, sim);
    print_warnings(stats.warnings);
    write_histogram(ctx.out("conversion_ratio_hist.csv"), stats.conversion_ratio_hist);
    write_histogram(ctx.out("conversion_time_hist.csv"), stats.conversion_time_hist);
    write_histogram(ctx.out("default_time_hist.csv"), stats.default_time_hist);

    auto& t = ctx.text;
    print_params(t, p);
    t << "equity profiles: " << n << " points on [" << num(v_min) << ", " << num(v_max) << "], maturity " << fixed(T, 4)
      << " -> equity_profile.csv\n";
    print_price(t, "coco", stats.price);
    t << "conversions " << stats.n_conversions << ", defaults " << stats.n_defaults << ", mean conversion ratio "
      << fixed(stats.mean_conversion_ratio, 6) << '\n';
    if (ctx.options.csv) {
        Csv csv(ctx.out("path_statistics.csv"), "n_paths,n_conversions,n_defaults,mean_conversion_ratio,price");
        csv.row(stats.price.n_paths, stats.n_conversions, stats.n_defaults, stats.mean_conversion_ratio,
                stats.price.estimate);
    }
}

using Handler = void (*)(Context&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
    static const std::vector<std::pair<std::string, Handler>> table = {
        {"calibrate", cmd_calibrate},       {"price-coco", cmd_price_coco}, {"price-pdb", cmd_price_pdb},
        {"price-stripped", cmd_price_stripped}, {"regress-capital", cmd_regress}, {"stress", cmd_stress},
        {"grid", cmd_grid},                 {"sampling-check", cmd_sampling}, {"profiles", cmd_profiles},
    };
    return table;
}

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, h] : handlers()) n.push_back(name);
        return n;
    }();
    return names;
}

void run_command(const std::string& name, const Config& config, const RunOptions& options, std::ostream& text) {
    const auto& table = handlers();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == name; });
    if (it == table.end()) throw InvalidArgument("unknown command '" + name + "'");
    fs::create_directories(options.out_dir);
    Context ctx{config, options, text, {}};
    it->second(ctx);
    if (!options.config_file.empty()) ctx.inputs.insert(ctx.inputs.begin(), options.config_file);
    write_manifest(options.out_dir, name, config, ctx.inputs);
}

int exit_code_for(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        switch (err->category()) {
        case Error::Category::input: return 1;
        case Error::Category::calibration: return 2;
        case Error::Category::numerical: return 3;
        }
    }
    if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return 1;
    return 3;
}

} // namespace coco::app
