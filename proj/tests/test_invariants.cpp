#include <doctest.h>

#include <sstream>

#include "negspec/verify.hpp"

using namespace negspec;

TEST_CASE("invariant suite") {
    const auto report = verify::check_invariants(verify::Options{});
    REQUIRE(report.checks.size() >= 15);
    for (const auto& c : report.checks) {
        INFO(verify::format_check(c));
        CHECK(c.passed);
    }
    CHECK(report.passed());
    CHECK(report.seconds < 60.0);
}

TEST_CASE("invariant suite is deterministic") {
    const auto a = verify::check_invariants(verify::Options{true, 7});
    const auto b = verify::check_invariants(verify::Options{true, 7});
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].name == b.checks[i].name);
        CHECK(a.checks[i].measured == b.checks[i].measured);
    }
}

TEST_CASE("report formatting") {
    verify::Check c{"x", verify::Relation::within, true, 1.0, 1.0, 0.5, "", true};
    CHECK(verify::format_check(c).rfind("PASS x", 0) == 0);
    c.passed = false;
    CHECK(verify::format_check(c).rfind("FAIL x", 0) == 0);
    c.gated = false;
    CHECK(verify::format_check(c).rfind("INFO x", 0) == 0);

    verify::Report r;
    r.checks.push_back(c);
    CHECK(r.passed());
    c.gated = true;
    r.checks.push_back(c);
    CHECK(!r.passed());
    std::ostringstream os;
    verify::print_report(os, r);
    CHECK(os.str().find("FAIL") != std::string::npos);

    CHECK(verify::parse_suite("all") == verify::Suite::all);
    CHECK(std::string(verify::suite_name(verify::Suite::smeared)) == "smeared");
    CHECK_THROWS(verify::parse_suite("bogus"));
}
