// One PASS/FAIL line per acceptance criterion, with the measured values indented below it.
// Usage: acceptance <path to negspec>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "negspec/verify.hpp"

using namespace negspec;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
    std::vector<std::string> lines;
};

Outcome from_report(const verify::Report& r) {
    Outcome o;
    o.passed = r.passed();
    for (const auto& c : r.checks)
        o.lines.push_back(verify::format_check(c));
    return o;
}

std::string run_command(const std::string& cmd, int& status) {
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        status = -1;
        return out;
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        out.append(buf, n);
    status = pclose(p);
    return out;
}

Outcome fig1_from_cli(const std::string& negspec) {
    Outcome o;
    int status = 0;
    const std::string csv = run_command("'" + negspec + "' fig1", status);
    if (status != 0) {
        o.detail = "negspec fig1 exited with status " + std::to_string(status);
        return o;
    }
    std::istringstream is(csv);
    std::string line;
    bool header = false;
    double k = NAN, max_p0 = -INFINITY, min_pt = INFINITY, where = NAN;
    double prev_T = NAN, prev_total = NAN;
    int rows = 0, changes = 0;
    while (std::getline(is, line)) {
        if (line.rfind("# k = ", 0) == 0)
            k = std::stod(line.substr(6));
        if (line.empty() || line[0] == '#')
            continue;
        if (!header) {
            header = line == "T,P0,PT,total";
            if (!header) {
                o.detail = "unexpected header '" + line + "'";
                return o;
            }
            continue;
        }
        double T, p0, pt, total;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &T, &p0, &pt, &total) != 4) {
            o.detail = "malformed row '" + line + "'";
            return o;
        }
        ++rows;
        max_p0 = std::max(max_p0, p0);
        min_pt = std::min(min_pt, pt);
        if (rows > 1 && (total < 0.0) != (prev_total < 0.0)) {
            ++changes;
            where = prev_T + (T - prev_T) * prev_total / (prev_total - total);
        }
        prev_T = T;
        prev_total = total;
    }
    const double ratio = where / k;
    o.passed = rows > 0 && max_p0 < 0.0 && min_pt > 0.0 && changes == 1 && ratio >= 1.03 && ratio <= 1.05;
    char buf[256];
    std::snprintf(buf, sizeof buf, "rows=%d max P0=%.6g min PT=%.6g sign changes=%d at T/k=%.6f", rows, max_p0,
                  min_pt, changes, ratio);
    o.detail = buf;
    return o;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path to negspec>\n";
        return 2;
    }
    const std::string negspec = argv[1];
    const verify::Options opts;

    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "crossover temperature", 1.0, [&] { return from_report(verify::check_crossover(opts)); }},
        {2, "fig1 reproduction through the CLI", 1.0, [&] { return fig1_from_cli(negspec); }},
        {3, "scalar inverse transform", 60.0, [&] { return from_report(verify::check_inverse_scalar(opts)); }},
        {4, "energy density inverse transform", 60.0, [&] { return from_report(verify::check_inverse_em(opts)); }},
        {5, "thermal forward transform and positivity", 120.0,
         [&] { return from_report(verify::check_thermal_forward(opts)); }},
        {6, "order of limits", 120.0, [&] { return from_report(verify::check_order_of_limits(opts)); }},
        {7, "smeared observable", 300.0, [&] { return from_report(verify::check_smeared(opts)); }},
        {8, "temporal spectrum", 60.0, [&] { return from_report(verify::check_temporal(opts)); }},
        {9, "band limit properties", 10.0, [&] { return from_report(verify::check_band_limit(opts)); }},
        {10, "invariant suites", 60.0, [&] { return from_report(verify::check_invariants(opts)); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome o = c.run();
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = seconds < c.limit_seconds;
        const bool ok = o.passed && in_time;
        failed += ok ? 0 : 1;
        char timing[96];
        std::snprintf(timing, sizeof timing, "%.2f s, limit %g s", seconds, c.limit_seconds);
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << timing
                  << (in_time ? "" : ", too slow") << ")" << (o.detail.empty() ? "" : ": " + o.detail) << '\n';
        for (const auto& line : o.lines)
            std::cout << "    " << line << '\n';
        std::cout.flush();
    }
    std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAILED") << '\n';
    return failed == 0 ? 0 : 1;
}
