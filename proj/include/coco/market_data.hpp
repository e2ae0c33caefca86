#pragma once

#include "coco/dates.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace coco {

/// A running CDS par spread for a spot-starting contract.
struct CdsQuote {
    double tenor_years = 0.0;
    double spread = 0.0; ///< decimal per annum (0.0436 for 436 bps)
};

/// Everything observed on the valuation date.
struct MarketSnapshot {
    Date valuation_date{};
    double r = 0.0;                      ///< flat continuously-compounded rate
    double q = 0.0;                      ///< payout ratio assumption
    std::vector<CdsQuote> cds_quotes;    ///< ascending tenor
    double equity_observable = 0.0;      ///< market capitalisation / total assets
    double share_price = 0.0;            ///< currency per share
    double reported_capital_ratio = 0.0; ///< last reported tier-1 ratio
    double recovery_R = 0.40;            ///< CDS recovery

    /// Throws ValidationError if any invariant is violated.
    void validate() const;
    bool has_equity() const { return equity_observable > 0.0; }
};

struct BalanceSheetRecord {
    std::string entity_id;
    Date date{};
    std::string rating_class;
    double tier1_ratio = 0.0;
    double total_assets = 0.0;
    double total_liabilities = 0.0;

    /// Asset/equity ratio A / (A - L).
    double asset_equity_ratio() const { return total_assets / (total_assets - total_liabilities); }
};

struct RejectedRecord {
    std::size_t line = 0;
    BalanceSheetRecord record;
    std::string reason;
};

/// Balance-sheet panel split into regression-admissible records and rejects.
struct BalanceSheetPanel {
    std::vector<BalanceSheetRecord> records;
    std::vector<RejectedRecord> rejects;

    std::vector<BalanceSheetRecord> by_class(const std::string& rating_class) const;
    std::vector<std::string> rating_classes() const;
    /// Records of one class grouped by balance-sheet date (ascending).
    std::map<Date, std::vector<BalanceSheetRecord>> by_date(const std::string& rating_class) const;
};

/// e^{-r (T - t)}. Throws InvalidInterval when T < t.
double discount_factor(double r, double t, double T);

/// Reads `tenor_years,spread_bps`; returns quotes sorted by tenor with spreads in decimals.
std::vector<CdsQuote> load_cds_quotes(const std::filesystem::path& path);
std::vector<CdsQuote> parse_cds_quotes(std::istream& in, const std::string& source);
void write_cds_quotes(std::ostream& out, const std::vector<CdsQuote>& quotes);

/// Reads `entity_id,date,rating_class,tier1_ratio,total_assets,total_liabilities`.
BalanceSheetPanel load_balance_sheet_panel(const std::filesystem::path& path);
BalanceSheetPanel parse_balance_sheet_panel(std::istream& in, const std::string& source);

} // namespace coco
