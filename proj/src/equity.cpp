#include "coco/equity.hpp"

#include "coco/errors.hpp"
#include "coco/normal.hpp"
#include "coco/rng.hpp"

#include <algorithm>
#include <cmath>

namespace coco {

double equity_value(const At1pParams& p, double t, double Vt, double T) {
    if (!(T > t) || t < 0.0) throw InvalidInterval("equity_value needs T > t >= 0");
    if (!(Vt > 0.0)) throw InvalidArgument("equity_value needs a positive firm value");
    const double Ht = barrier(p, t);
    if (Vt <= Ht) return 0.0;
    const double HT = barrier(p, T);
    const double D = std::exp(-p.r * (T - t));
    const double growth = std::exp((p.r - p.q) * (T - t));
    const double U = integrated_variance(p.vol, t, T);
    if (U <= 0.0) return D * std::max(Vt * growth - HT, 0.0);

    // In log(V / barrier) coordinates the firm value is a Brownian motion with drift (B - 1/2)
    // per unit of integrated variance, killed at zero; the payoff is barrier(T) (e^Y - 1)^+.
    const double B = p.B;
    const double y0 = std::log(Vt / Ht);
    const double sU = std::sqrt(U);
    const double d3 = -(y0 + (B + 0.5) * U) / sU;
    const double d4 = -(y0 + (B - 0.5) * U) / sU;
    const double d5 = (y0 - (B + 0.5) * U) / sU;
    const double d6 = (y0 - (B - 0.5) * U) / sU;
    const double ratio = Ht / Vt;
    const double value = D * (Vt * growth * norm_cdf(-d3) - HT * norm_cdf(-d4) -
                              Ht * std::pow(ratio, 2.0 * B) * growth * norm_cdf(-d5) +
                              HT * std::pow(ratio, 2.0 * B - 1.0) * norm_cdf(-d6));
    return std::max(value, 0.0);
}

EquityVariant parse_equity_variant(std::string_view name) {
    if (name == "bs_fixed_strike") return EquityVariant::bs_fixed_strike;
    if (name == "bs_moving_strike") return EquityVariant::bs_moving_strike;
    if (name == "at1p_dao_call") return EquityVariant::at1p_dao_call;
    if (name == "at1p_plain_call") return EquityVariant::at1p_plain_call;
    throw InvalidArgument("unknown equity variant '" + std::string(name) + "'");
}

std::string to_string(EquityVariant v) {
    switch (v) {
    case EquityVariant::bs_fixed_strike: return "bs_fixed_strike";
    case EquityVariant::bs_moving_strike: return "bs_moving_strike";
    case EquityVariant::at1p_dao_call: return "at1p_dao_call";
    case EquityVariant::at1p_plain_call: return "at1p_plain_call";
    }
    throw InvalidArgument("unknown equity variant");
}

namespace {

double black_scholes_call(double S, double K, double r, double q, double total_var, double T) {
    if (S <= 0.0) return 0.0;
    const double fwd = S * std::exp((r - q) * T);
    const double D = std::exp(-r * T);
    if (total_var <= 0.0) return D * std::max(fwd - K, 0.0);
    const double s = std::sqrt(total_var);
    const double d1 = (std::log(fwd / K) + 0.5 * total_var) / s;
    return D * (fwd * norm_cdf(d1) - K * norm_cdf(d1 - s));
}

} // namespace

std::vector<ProfilePoint> equity_profile(const At1pParams& p, const std::vector<double>& V_grid, double T,
                                         EquityVariant variant, const ProfileOptions& options) {
    if (V_grid.empty()) throw InvalidArgument("equity profile needs a nonempty grid");
    if (!(T > 0.0)) throw InvalidInterval("equity profile needs T > 0");
    for (double V : V_grid)
        if (!(V > 0.0)) throw InvalidArgument("equity profile grid must be positive");

    std::vector<ProfilePoint> out;
    out.reserve(V_grid.size());
    const double sigma1 = p.vol.sigmas.front();
    switch (variant) {
    case EquityVariant::bs_fixed_strike:
    case EquityVariant::bs_moving_strike: {
        const double K = variant == EquityVariant::bs_fixed_strike ? barrier(p, 0.0) : barrier(p, T);
        for (double V : V_grid) out.push_back({V, black_scholes_call(V, K, p.r, p.q, sigma1 * sigma1 * T, T), 0.0});
        break;
    }
    case EquityVariant::at1p_dao_call:
        for (double V : V_grid) out.push_back({V, equity_value(p, 0.0, V, T), 0.0});
        break;
    case EquityVariant::at1p_plain_call: {
        if (options.mc_paths < 2) throw InvalidArgument("plain-call profile needs at least 2 paths");
        const double I = integrated_variance(p.vol, 0.0, T);
        const double HT = barrier(p, T);
        const double D = std::exp(-p.r * T);
        const double drift = (p.r - p.q) * T - 0.5 * I;
        const double s = std::sqrt(I);
        std::vector<double> growth(options.mc_paths);
        NormalSource z(path_engine(options.seed, 0, Stream::firm_value));
        for (auto& g : growth) g = std::exp(drift + s * z());
        for (double V : V_grid) {
            double mean = 0.0, m2 = 0.0;
            std::size_t n = 0;
            for (double g : growth) {
                const double x = D * std::max(V * g - HT, 0.0);
                ++n;
                const double delta = x - mean;
                mean += delta / static_cast<double>(n);
                m2 += delta * (x - mean);
            }
            const double var = m2 / static_cast<double>(n - 1);
            out.push_back({V, mean, std::sqrt(var / static_cast<double>(n))});
        }
        break;
    }
    }
    return out;
}

} // namespace coco
