// Reproduction gate: every criterion of the suite must hold at its declared
// tolerance. Prints one line per criterion.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "funcoord/acceptance.hpp"

using namespace funcoord;

TEST_CASE("acceptance suite") {
    const auto results = run_acceptance(1);
    REQUIRE(results.size() == 12);
    for (const auto& r : results) {
        std::printf("%-28s %s  (max residual %.3g, tolerance %.3g) %s\n", r.name.c_str(),
                    r.passed ? "PASS" : "FAIL", r.max_residual, r.tolerance, r.detail.c_str());
        INFO(r.name, ": ", r.detail);
        CHECK(r.passed);
    }
}

TEST_CASE("summary csv is stable across reruns") {
    const std::string a = acceptance_csv(run_acceptance(42));
    const std::string b = acceptance_csv(run_acceptance(42));
    CHECK(a == b);
    CHECK(a.find("criterion,passed,max_residual,tolerance,detail") == 0);
}

TEST_CASE("csv escaping is rfc-4180 style") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("with,comma") == "\"with,comma\"");
    CHECK(csv_escape("with\"quote") == "\"with\"\"quote\"");
    CHECK(format_float(0.5) == "0.5");
    CHECK(format_float(1.0 / 3.0) == "0.33333333333333331");
}
