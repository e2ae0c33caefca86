#pragma once

#include "coco/at1p.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coco {

/// Equity per unit firm value: a down-and-out call on V with strike and barrier given by the
/// safety barrier, maturity T. Zero at or below the barrier.
double equity_value(const At1pParams& p, double t, double Vt, double T);

enum class EquityVariant { bs_fixed_strike, bs_moving_strike, at1p_dao_call, at1p_plain_call };

EquityVariant parse_equity_variant(std::string_view name);
std::string to_string(EquityVariant v);

struct ProfilePoint {
    double V = 0.0;
    double price = 0.0;
    double stderr_ = 0.0; ///< nonzero only for the Monte Carlo variant
};

struct ProfileOptions {
    std::size_t mc_paths = 200000;
    std::uint64_t seed = 1;
};

/// Prices one variant on a grid of initial firm values (time 0, maturity T).
///  bs_fixed_strike   Black-Scholes call, vol sigma_1, strike barrier(0)
///  bs_moving_strike  Black-Scholes call, vol sigma_1, strike barrier(T)
///  at1p_dao_call     closed-form equity_value
///  at1p_plain_call   Monte Carlo call on the AT1P terminal value, strike barrier(T); common
///                    random numbers across the grid
std::vector<ProfilePoint> equity_profile(const At1pParams& p, const std::vector<double>& V_grid, double T,
                                         EquityVariant variant, const ProfileOptions& options = {});

} // namespace coco
