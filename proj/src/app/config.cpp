#include "app/config.hpp"

#include "coco/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace coco::app {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double v = 0.0;
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw InvalidArgument("'" + what + "' expects a number, got '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(parse_double(item, what));
    return out;
}

Config Config::parse(std::istream& in, const std::string& source) {
    Config c;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(source, n, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(source, n, "empty key");
        c.values_[key] = trim(line.substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config '" + path.string() + "'");
    Config c = parse(in, path.string());
    c.base_dir_ = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
    return c;
}

void Config::set_assignment(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    if (key.empty()) throw InvalidArgument("--set expects key=value, got '" + assignment + "'");
    values_[key] = trim(assignment.substr(eq + 1));
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw InvalidArgument("missing configuration key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? parse_double(values_.at(key), key) : fallback;
}

double Config::require_double(const std::string& key) const { return parse_double(require_string(key), key); }

long long Config::get_int(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const std::string t = trim(values_.at(key));
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
        throw InvalidArgument("'" + key + "' expects an integer, got '" + t + "'");
    return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = values_.at(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InvalidArgument("'" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
    return has(key) ? parse_list(values_.at(key), key) : fallback;
}

std::filesystem::path Config::get_path(const std::string& key) const {
    std::filesystem::path p = require_string(key);
    if (p.is_relative()) p = base_dir_ / p;
    if (!std::filesystem::exists(p)) throw InvalidArgument("'" + key + "' refers to a missing file: " + p.string());
    return p;
}

MarketSnapshot snapshot_from(const Config& c) {
    MarketSnapshot s;
    s.valuation_date = parse_date(c.require_string("valuation_date"));
    s.r = c.require_double("r");
    s.q = c.get_double("q", 0.0);
    s.cds_quotes = load_cds_quotes(c.get_path("cds_quotes"));
    s.equity_observable = c.get_double("equity_observable", 0.0);
    s.share_price = c.get_double("share_price", 0.0);
    s.reported_capital_ratio = c.require_double("reported_capital_ratio");
    s.recovery_R = c.get_double("recovery_R", 0.40);
    s.validate();
    return s;
}

CocoSpec coco_from(const Config& c) {
    CocoSpec spec;
    if (c.has("coco_issue_date")) spec.issue_date = parse_date(c.require_string("coco_issue_date"));
    spec.maturity_date = parse_date(c.require_string("coco_maturity"));
    spec.coupon_rate = c.get_double("coco_coupon", spec.coupon_rate);
    spec.frequency = static_cast<int>(c.get_int("coco_frequency", spec.frequency));
    spec.conversion_price = c.get_double("conversion_price", spec.conversion_price);
    spec.trigger_cbar = c.get_double("trigger_cbar", spec.trigger_cbar);
    spec.validate();
    return spec;
}

BondSpec pdb_from(const Config& c) {
    BondSpec spec;
    spec.maturity_date = parse_date(c.require_string("pdb_maturity"));
    spec.coupon_rate = c.get_double("pdb_coupon", spec.coupon_rate);
    spec.frequency = static_cast<int>(c.get_int("pdb_frequency", spec.frequency));
    spec.recovery_R = c.get_double("pdb_recovery", spec.recovery_R);
    spec.validate();
    return spec;
}

CapitalRatioModel capital_from(const Config& c) {
    CapitalRatioModel m;
    m.rating_class = c.get_string("rating_class", "");
    m.alpha_bar = c.require_double("alpha_bar");
    m.beta_bar = c.require_double("beta_bar");
    m.eta = c.get_double("eta", 1.0);
    m.trigger_cbar = c.get_double("trigger_cbar", 0.05);
    m.validate();
    return m;
}

SimConfig sim_from(const Config& c) {
    SimConfig s;
    s.dt = c.get_double("dt", s.dt);
    const long long paths = c.get_int("n_paths", static_cast<long long>(s.n_paths));
    if (paths < 0) throw InvalidArgument("n_paths must be nonnegative");
    s.n_paths = static_cast<std::size_t>(paths);
    s.seed = static_cast<std::uint64_t>(c.get_int("seed", 1));
    s.antithetic = c.get_bool("antithetic", false);
    s.path_refinement = static_cast<int>(c.get_int("path_refinement", 1));
    s.threads = static_cast<unsigned>(c.get_int("threads", 0));
    const std::string mode = c.get_string("x_std_mode", "per_time");
    if (mode == "per_time")
        s.x_std_mode = XStdMode::per_time;
    else if (mode == "constant")
        s.x_std_mode = XStdMode::constant;
    else
        throw InvalidArgument("x_std_mode must be per_time or constant");
    s.accrued_at_event = c.get_bool("accrued_at_event", false);
    s.validate();
    return s;
}

namespace {

std::string join(const std::vector<double>& v) {
    std::string out;
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        out += (i ? "," : "") + std::string(buf);
    }
    return out;
}

} // namespace

void write_params(std::ostream& out, const At1pParams& p) {
    char buf[64];
    auto line = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << key << '=' << buf << '\n';
    };
    line("B", p.B);
    line("H", p.H);
    line("V0", p.V0);
    line("r", p.r);
    line("q", p.q);
    out << "vol_nodes=" << join(p.vol.node_times) << '\n';
    out << "sigmas=" << join(p.vol.sigmas) << '\n';
}

At1pParams parse_params(std::istream& in, const std::string& source) {
    const Config c = Config::parse(in, source);
    At1pParams p;
    p.B = c.require_double("B");
    p.H = c.require_double("H");
    p.V0 = c.get_double("V0", 1.0);
    p.r = c.require_double("r");
    p.q = c.get_double("q", 0.0);
    p.vol.node_times = parse_list(c.require_string("vol_nodes"), "vol_nodes");
    p.vol.sigmas = parse_list(c.require_string("sigmas"), "sigmas");
    p.validate();
    return p;
}

At1pParams read_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open parameter file '" + path.string() + "'");
    return parse_params(in, path.string());
}

} // namespace coco::app
