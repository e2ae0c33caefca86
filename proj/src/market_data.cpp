#include "coco/market_data.hpp"

#include "coco/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace coco {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string_view rest(line);
    for (;;) {
        const auto comma = rest.find(',');
        fields.push_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return fields;
}

double parse_number(const std::string& field, const std::string& source, std::size_t line,
                    const char* column) {
    double value = 0.0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw ParseError(source, line, std::string("bad numeric value '") + field + "' in column " + column);
    return value;
}

bool blank_or_comment(const std::string& line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
    return in;
}

} // namespace

void MarketSnapshot::validate() const {
    if (cds_quotes.empty()) throw ValidationError("market snapshot needs at least one CDS quote");
    for (std::size_t i = 0; i < cds_quotes.size(); ++i) {
        if (!(cds_quotes[i].tenor_years > 0.0) || !(cds_quotes[i].spread > 0.0))
            throw ValidationError("CDS quotes need positive tenor and spread");
        if (i > 0 && !(cds_quotes[i].tenor_years > cds_quotes[i - 1].tenor_years))
            throw ValidationError("CDS quote tenors must be strictly increasing");
    }
    if (!(recovery_R >= 0.0 && recovery_R < 1.0)) throw ValidationError("recovery must lie in [0,1)");
    if (!(reported_capital_ratio > 0.0)) throw ValidationError("reported capital ratio must be positive");
    if (equity_observable < 0.0) throw ValidationError("equity observable must be positive when given");
}

std::vector<BalanceSheetRecord> BalanceSheetPanel::by_class(const std::string& rating_class) const {
    std::vector<BalanceSheetRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [&](const BalanceSheetRecord& r) { return r.rating_class == rating_class; });
    return out;
}

std::vector<std::string> BalanceSheetPanel::rating_classes() const {
    std::set<std::string> classes;
    for (const auto& r : records) classes.insert(r.rating_class);
    return {classes.begin(), classes.end()};
}

std::map<Date, std::vector<BalanceSheetRecord>>
BalanceSheetPanel::by_date(const std::string& rating_class) const {
    std::map<Date, std::vector<BalanceSheetRecord>> out;
    for (const auto& r : records)
        if (r.rating_class == rating_class) out[r.date].push_back(r);
    return out;
}

double discount_factor(double r, double t, double T) {
    if (T < t) throw InvalidInterval("discount_factor: T < t");
    return std::exp(-r * (T - t));
}

std::vector<CdsQuote> parse_cds_quotes(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<CdsQuote> quotes;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        const auto fields = split_csv(line);
        if (!header_seen) {
            if (fields.size() != 2 || fields[0] != "tenor_years" || fields[1] != "spread_bps")
                throw SchemaError(source + ": expected header 'tenor_years,spread_bps'");
            header_seen = true;
            continue;
        }
        if (fields.size() != 2) throw ParseError(source, line_no, "expected 2 fields");
        CdsQuote q;
        q.tenor_years = parse_number(fields[0], source, line_no, "tenor_years");
        q.spread = parse_number(fields[1], source, line_no, "spread_bps") / 1e4;
        if (!(q.tenor_years > 0.0)) throw ParseError(source, line_no, "tenor must be positive");
        if (!(q.spread > 0.0)) throw ParseError(source, line_no, "spread must be positive");
        quotes.push_back(q);
    }
    if (!header_seen) throw ValidationError(source + ": empty CDS quote file");
    if (quotes.empty()) throw ValidationError(source + ": no CDS quotes");
    std::stable_sort(quotes.begin(), quotes.end(),
                     [](const CdsQuote& a, const CdsQuote& b) { return a.tenor_years < b.tenor_years; });
    for (std::size_t i = 1; i < quotes.size(); ++i)
        if (quotes[i].tenor_years == quotes[i - 1].tenor_years)
            throw ValidationError(source + ": duplicate tenor " + std::to_string(quotes[i].tenor_years));
    return quotes;
}

std::vector<CdsQuote> load_cds_quotes(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_cds_quotes(in, path.string());
}

void write_cds_quotes(std::ostream& out, const std::vector<CdsQuote>& quotes) {
    out << "tenor_years,spread_bps\n";
    char buf[64];
    for (const auto& q : quotes) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", q.tenor_years, q.spread * 1e4);
        out << buf;
    }
}

BalanceSheetPanel parse_balance_sheet_panel(std::istream& in, const std::string& source) {
    static const std::vector<std::string> required = {"entity_id",   "date",         "rating_class",
                                                      "tier1_ratio", "total_assets", "total_liabilities"};
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::size_t> column;
    BalanceSheetPanel panel;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        const auto fields = split_csv(line);
        if (column.empty()) {
            for (const auto& name : required) {
                const auto it = std::find(fields.begin(), fields.end(), name);
                if (it == fields.end()) throw SchemaError(source + ": missing column '" + name + "'");
                column.push_back(static_cast<std::size_t>(it - fields.begin()));
            }
            continue;
        }
        if (fields.size() < required.size()) throw ParseError(source, line_no, "too few fields");
        BalanceSheetRecord rec;
        rec.entity_id = fields[column[0]];
        try {
            rec.date = parse_date(fields[column[1]]);
        } catch (const InvalidArgument& e) {
            throw ParseError(source, line_no, e.what());
        }
        rec.rating_class = fields[column[2]];
        rec.tier1_ratio = parse_number(fields[column[3]], source, line_no, "tier1_ratio");
        rec.total_assets = parse_number(fields[column[4]], source, line_no, "total_assets");
        rec.total_liabilities = parse_number(fields[column[5]], source, line_no, "total_liabilities");

        std::string reason;
        if (!(rec.total_liabilities > 0.0))
            reason = "non-positive total liabilities";
        else if (!(rec.total_assets > rec.total_liabilities))
            reason = "total assets do not exceed total liabilities";
        else if (!(rec.tier1_ratio > 0.0 && rec.tier1_ratio < 1.0))
            reason = "tier-1 ratio outside (0,1)";
        if (reason.empty())
            panel.records.push_back(std::move(rec));
        else
            panel.rejects.push_back({line_no, std::move(rec), reason});
    }
    if (column.empty()) throw SchemaError(source + ": empty balance-sheet file");
    return panel;
}

BalanceSheetPanel load_balance_sheet_panel(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_balance_sheet_panel(in, path.string());
}

} // namespace coco
