#include "chebgap/errors.hpp"
#include "chebgap/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace chebgap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("chebgap_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kEstarText = R"({
  "set": [[-1, -0.6], [0.6, 1]],
  "n_range": [1, 6],
  "cross_validate_up_to": 4,
  "comb_q_max": 50
})";

} // namespace

TEST_CASE("config parsing") {
    auto c = parse_config(kEstarText);
    CHECK(c.intervals.size() == 2);
    CHECK(c.n_min == 1);
    CHECK(c.n_max == 6);
    CHECK(c.cross_validate_up_to == 4);
    CHECK(c.comb_q_max == 50);
    CHECK(c.grid.empty());
    CHECK(!c.almost_period_eps);

    CHECK_THROWS_AS(parse_config("not json"), ValidationError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"n_range": [1, 3]})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"set": [[-1, 1]], "n_range": [1, 3], "colour": 1})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"set": [[-1, 1]], "n_range": [0, 3]})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"set": [[-1, 1]], "n_range": [5, 3]})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"set": [[-1, 1]], "n_range": [1, 61]})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"set": [[-1, 1]], "n_range": [1, 3], "cross_validate_up_to": 9})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"set": [[-1, 1]], "n_range": [1, 3], "tolerances": {"remez": -1}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"set": [[-1, 1]], "n_range": [1, 3], "grid": "fine"})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"set": [[-1, 1]], "n_range": [1, 3], "comb_q_max": 0})"),
                    ValidationError);
}

TEST_CASE("bad sets are rejected with the config") {
    CHECK_THROWS_AS(parse_config(R"({"set": [[-1, 0], [-0.5, 1]], "n_range": [1, 3]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"set": [[1, -1]], "n_range": [1, 3]})"), ValidationError);
}

TEST_CASE("E* run: artifacts, suites and determinism") {
    auto c = parse_config(kEstarText);
    c.output = scratch("estar_a");
    auto a = run_experiment(c, kEstarText);
    REQUIRE(a.code == ExitCode::ok);
    REQUIRE(a.rows.size() == 6);
    for (const auto& s : a.suites)
        CHECK_MESSAGE(s.pass, s.name << ": " << s.detail);
    for (const char* f : {"config.json", "diagnostics.csv", "comb.json", "summary.txt",
                          "manifest.json", "solutions/n_001.json", "solutions/n_006.json"})
        CHECK_MESSAGE(fs::exists(c.output / f), f);

    const auto csv = slurp(c.output / "diagnostics.csv");
    CHECK(csv.rfind("# chebgap diagnostics schema 1\n", 0) == 0);
    CHECK(csv == diagnostics_csv(a.rows));

    // a second run with more threads must produce the same bytes
    c.output = scratch("estar_b");
    c.threads = 3;
    auto b = run_experiment(c, kEstarText);
    REQUIRE(b.code == ExitCode::ok);
    CHECK(slurp(c.output / "diagnostics.csv") == csv);

    const auto s2 = show_solution(c.output, 2);
    CHECK(s2.find("t_n = 0.32") != std::string::npos);
    CHECK(s2.find("gap zeros: none") != std::string::npos);
    const auto s1 = show_solution(c.output, 1);
    CHECK(s1.find("n = 1") != std::string::npos);
    CHECK_THROWS_AS(show_solution(c.output, 40), ValidationError);

    CHECK(slurp(c.output / "summary.txt").find("capacity: 0.4") != std::string::npos);
}
