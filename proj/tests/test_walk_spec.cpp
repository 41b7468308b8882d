#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "qg/errors.hpp"
#include "qg/walk_spec.hpp"
#include "support.hpp"

using namespace qg;

TEST_CASE("kernel document parses with omitted entries read as zero") {
    WalkSpec ws = parse_walk_spec(
        R"({"kernel": {"p_1_0": 0.3333333333333333, "p_-1_1": 0.3333333333333333,
            "p_0_-1": 0.3333333333333334}})");
    CHECK(ws.kernel.at(1, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(ws.kernel.at(1, 1) == 0.0);
    CHECK(!ws.family.has_value());
    CHECK(ws.source == "<inline>");
}

TEST_CASE("family document parses and derives the kernel") {
    WalkSpec ws = parse_walk_spec(
        R"({"family": {"alpha": 1.0, "beta": 0.0, "p11": 0.0, "p10": 0.3333333333333333}})");
    REQUIRE(ws.family.has_value());
    CHECK(ws.family->alpha == 1.0);
    CHECK(ws.kernel.at(0, -1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("document shape violations are io errors") {
    CHECK_THROWS_AS((void)parse_walk_spec("{}"), io_error);
    CHECK_THROWS_AS((void)parse_walk_spec(R"({"kernel": {}, "family": {}})"), io_error);
    CHECK_THROWS_AS((void)parse_walk_spec(R"({"kernel": {"p_2_0": 0.5}})"), io_error);
    CHECK_THROWS_AS((void)parse_walk_spec(R"({"kernel": {"p_1_0": "x"}})"), io_error);
    CHECK_THROWS_AS((void)parse_walk_spec(R"({"surprise": 1})"), io_error);
    CHECK_THROWS_AS((void)parse_walk_spec("not json"), io_error);
}

TEST_CASE("infeasible family parameters surface as infeasible_error") {
    CHECK_THROWS_AS(
        (void)parse_walk_spec(R"({"family": {"alpha": 0.1, "beta": 0, "p11": 0, "p10": 0.1}})"),
        infeasible_error);
}

TEST_CASE("load reads a file and records its path") {
    const char* path = "walk_spec_roundtrip.json";
    {
        std::ofstream out(path);
        out << R"({"kernel": {"p_1_0": 0.25, "p_-1_0": 0.25, "p_0_1": 0.25, "p_0_-1": 0.25}})";
    }
    WalkSpec ws = load_walk_spec(path);
    CHECK(ws.kernel.at(0, 1) == 0.25);
    CHECK(ws.source == path);
    std::remove(path);
    CHECK_THROWS_AS((void)load_walk_spec("definitely_missing.json"), io_error);
}
