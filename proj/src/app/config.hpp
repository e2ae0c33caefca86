#pragma once

#include "coco/at1p.hpp"
#include "coco/bond.hpp"
#include "coco/capital.hpp"
#include "coco/market_data.hpp"
#include "coco/mc_engine.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coco::app {

/// Flat `key = value` configuration. Later assignments win; CLI overrides are applied last.
class Config {
public:
    static Config load(const std::filesystem::path& path);
    static Config parse(std::istream& in, const std::string& source);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    /// Parses `key=value`.
    void set_assignment(const std::string& assignment);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    double require_double(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
    /// Resolves a path relative to the config file's directory.
    std::filesystem::path get_path(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    const std::filesystem::path& base_dir() const { return base_dir_; }
    void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

private:
    std::map<std::string, std::string> values_;
    std::filesystem::path base_dir_ = ".";
};

double parse_double(const std::string& text, const std::string& what);
std::vector<double> parse_list(const std::string& text, const std::string& what);

MarketSnapshot snapshot_from(const Config& c);
CocoSpec coco_from(const Config& c);
BondSpec pdb_from(const Config& c);
CapitalRatioModel capital_from(const Config& c);
SimConfig sim_from(const Config& c);

/// Plain `key=value` parameter file shared between calibration and pricing.
void write_params(std::ostream& out, const At1pParams& p);
At1pParams read_params(const std::filesystem::path& path);
At1pParams parse_params(std::istream& in, const std::string& source);

} // namespace coco::app
