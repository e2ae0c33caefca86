#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/manifest.hpp"
#include "coco/errors.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace coco;
using namespace coco::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("coco_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parsing") {
    std::istringstream in("# comment\nr = 0.0054\n  name=abc  # trailing\n\nlist = 1, 2,3\nflag = true\n");
    auto c = Config::parse(in, "test");
    CHECK(c.require_double("r") == 0.0054);
    CHECK(c.get_string("name", "") == "abc");
    CHECK(c.get_list("list", {}) == std::vector<double>{1, 2, 3});
    CHECK(c.get_bool("flag", false));
    CHECK(c.get_int("missing", 42) == 42);
    CHECK_THROWS_AS(c.require_double("missing"), InvalidArgument);

    c.set_assignment("r=0.01");
    CHECK(c.require_double("r") == 0.01);
    CHECK_THROWS_AS(c.set_assignment("novalue"), InvalidArgument);

    std::istringstream bad("just text\n");
    CHECK_THROWS_AS(Config::parse(bad, "bad"), ParseError);
    CHECK_THROWS_AS(parse_double("1.5x", "r"), InvalidArgument);
}

TEST_CASE("reference config builds the reference inputs") {
    const auto c = Config::load(fs::path(COCO_DATA_DIR) / "lloyds.conf");
    const auto snap = snapshot_from(c);
    CHECK(snap.cds_quotes.size() == 7);
    CHECK(snap.r == 0.0054);
    CHECK(coco_from(c).conversion_price == 0.59);
    CHECK(capital_from(c).beta_bar == -0.002);
    CHECK(sim_from(c).n_paths == 100000);
}

TEST_CASE("parameter file round trip is exact") {
    auto p = testing::wide_sigma_set();
    p.B = 0.123456789012345;
    std::stringstream ss;
    write_params(ss, p);
    const auto q = parse_params(ss, "mem");
    CHECK(q.B == p.B);
    CHECK(q.H == p.H);
    CHECK(q.vol.sigmas == p.vol.sigmas);
    CHECK(q.vol.node_times == p.vol.node_times);
}

TEST_CASE("exit codes follow the error category") {
    CHECK(exit_code_for(InvalidArgument("x")) == 1);
    CHECK(exit_code_for(ParseError("f", 3, "x")) == 1);
    CHECK(exit_code_for(CalibrationError("x")) == 2);
    CHECK(exit_code_for(NumericalError("x")) == 3);
    CHECK(exit_code_for(DegenerateError("x")) == 3);
}

TEST_CASE("regress-capital writes its tables and a manifest") {
    const auto out = scratch("regress");
    auto c = Config::load(fs::path(COCO_DATA_DIR) / "lloyds.conf");
    RunOptions opt;
    opt.out_dir = out;
    opt.csv = true;
    std::ostringstream text;
    run_command("regress-capital", c, opt, text);
    CHECK(fs::exists(out / "regression.csv"));
    CHECK(fs::exists(out / "regression_summary.csv"));
    CHECK(fs::exists(out / "rejects.csv"));
    const auto manifest = slurp(out / "manifest.txt");
    CHECK(manifest.find("regress-capital") != std::string::npos);
    CHECK(manifest.find(sha256_file(fs::path(COCO_DATA_DIR) / "balance_sheet_panel.csv")) != std::string::npos);

    // thread settings do not leak into the manifest
    c.set("threads", "7");
    const auto out2 = scratch("regress2");
    opt.out_dir = out2;
    run_command("regress-capital", c, opt, text);
    CHECK(slurp(out2 / "manifest.txt") == manifest);

    CHECK_THROWS_AS(run_command("nope", c, opt, text), InvalidArgument);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
