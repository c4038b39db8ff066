#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "negspec/smeared.hpp"

namespace negspec {

// Flat `key = value` settings. `#` starts a comment; blank lines are ignored.
class RunConfig {
public:
    static RunConfig parse(std::istream& is, const std::string& source = "<config>");
    static RunConfig load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;

    // typed access; a present but malformed value is a UsageError
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    // UsageError naming the first key outside the allowed set
    void require_known(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    void write(std::ostream& os) const;

private:
    std::map<std::string, std::string> entries_;
};

double parse_double(const std::string& text, const std::string& what);
std::int64_t parse_int(const std::string& text, const std::string& what);
std::vector<double> parse_list(const std::string& text, const std::string& what);

struct SmearedRun {
    TestFunctionSpec s1;
    TestFunctionSpec s2;
    SmearingConfig cfg;
    std::vector<double> ell_factors{1.0, 2.0, 5.0};

    void validate() const;
};

const std::set<std::string>& smeared_config_keys();
SmearedRun smeared_run_from_config(const RunConfig& c);
RunConfig smeared_run_to_config(const SmearedRun& run);

} // namespace negspec
