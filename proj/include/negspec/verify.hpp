#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace negspec::verify {

enum class Suite { transforms, modesum, thermal, smeared, all };

const char* suite_name(Suite s);
// throws UsageError for unknown names
Suite parse_suite(const std::string& name);

struct Options {
    bool quick = false;
    std::uint64_t seed = 20080417;
};

// within: |measured - expected| <= tolerance; at_most: measured <= tolerance;
// below / above: strict comparison of measured against expected
enum class Relation { within, at_most, below, above };

struct Check {
    std::string name;
    Relation relation = Relation::within;
    bool passed = false;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string note;
    // informational lines carry numbers but never fail
    bool gated = true;
};

struct Report {
    std::vector<Check> checks;
    double seconds = 0.0;

    bool passed() const;
    void append(const Report& other);
};

std::string format_check(const Check& c);
void print_report(std::ostream& os, const Report& r);

// one function per acceptance area
Report check_crossover(const Options& opts);
Report check_fig1(const Options& opts);
Report check_inverse_scalar(const Options& opts);
Report check_inverse_em(const Options& opts);
Report check_thermal_forward(const Options& opts);
Report check_order_of_limits(const Options& opts);
Report check_smeared(const Options& opts);
Report check_temporal(const Options& opts);
Report check_band_limit(const Options& opts);
Report check_invariants(const Options& opts);

Report run_suite(Suite s, const Options& opts);

} // namespace negspec::verify
