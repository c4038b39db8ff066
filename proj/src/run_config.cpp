#include "negspec/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "negspec/errors.hpp"
#include "negspec/table.hpp"

namespace negspec {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ", ";
        out += format_double(v[i]);
    }
    return out;
}

} // namespace

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw UsageError(what + ": '" + text + "' is not a number");
    return v;
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        // allow integral values written as 1e6
        const double d = parse_double(t, what);
        if (!(std::abs(d) < 9.2e18) || d != std::trunc(d))
            throw UsageError(what + ": '" + text + "' is not an integer");
        return static_cast<std::int64_t>(d);
    }
    return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(item, what));
    if (out.empty())
        throw UsageError(what + ": empty list");
    return out;
}

RunConfig RunConfig::parse(std::istream& is, const std::string& source) {
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(lineno);
        if (eq == std::string::npos)
            throw UsageError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw UsageError(where + ": empty key");
        if (c.entries_.count(key))
            throw UsageError(where + ": duplicate key '" + key + "'");
        c.entries_[key] = value;
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file '" + path + "'");
    return parse(in, path);
}

void RunConfig::set(const std::string& key, const std::string& value) { entries_[key] = value; }

bool RunConfig::has(const std::string& key) const { return entries_.count(key) != 0; }

std::optional<std::string> RunConfig::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    return v ? parse_double(*v, key) : fallback;
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const {
    const auto v = get(key);
    return v ? parse_int(*v, key) : fallback;
}

std::vector<double> RunConfig::get_list(const std::string& key, const std::vector<double>& fallback) const {
    const auto v = get(key);
    return v ? parse_list(*v, key) : fallback;
}

void RunConfig::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : entries_)
        if (!allowed.count(k))
            throw UsageError("unknown config key '" + k + "'");
}

void RunConfig::write(std::ostream& os) const {
    for (const auto& [k, v] : entries_)
        os << k << " = " << v << '\n';
}

void SmearedRun::validate() const {
    s1.validate();
    s2.validate();
    cfg.validate();
    if (ell_factors.empty())
        throw DomainError("ell_factors must not be empty");
    for (double f : ell_factors)
        if (!(f > 0.0) || !std::isfinite(f))
            throw DomainError("ell_factors must be positive");
}

const std::set<std::string>& smeared_config_keys() {
    static const std::set<std::string> keys = [] {
        std::set<std::string> k{"ell", "epsilon", "mc_samples", "seed", "method", "quadrature_order",
                                "ell_factors"};
        for (const char* s : {"s1.", "s2."})
            for (const char* f : {"kind", "center", "sigma_t", "sigma_x", "amplitude"})
                k.insert(std::string(s) + f);
        return k;
    }();
    return keys;
}

SmearedRun smeared_run_from_config(const RunConfig& c) {
    c.require_known(smeared_config_keys());
    SmearedRun run;
    auto spec = [&](const std::string& p, TestFunctionSpec& s) {
        if (auto kind = c.get(p + "kind")) {
            try {
                s.kind = parse_test_function_kind(*kind);
            } catch (const DomainError& e) {
                throw UsageError(p + "kind: " + e.what());
            }
        }
        if (c.has(p + "center")) {
            const auto v = c.get_list(p + "center", {});
            if (v.size() != 4)
                throw UsageError(p + "center: expected four numbers t, x, y, z");
            s.center = {v[0], v[1], v[2], v[3]};
        }
        s.temporal_width = c.get_double(p + "sigma_t", s.temporal_width);
        s.spatial_width = c.get_double(p + "sigma_x", s.spatial_width);
        s.amplitude = c.get_double(p + "amplitude", s.amplitude);
    };
    spec("s1.", run.s1);
    spec("s2.", run.s2);
    run.cfg.ell = c.get_double("ell", run.cfg.ell);
    if (c.has("epsilon"))
        run.cfg.epsilon = c.get_double("epsilon", 0.0);
    run.cfg.mc_samples = c.get_int("mc_samples", run.cfg.mc_samples);
    const std::int64_t seed = c.get_int("seed", static_cast<std::int64_t>(run.cfg.seed));
    if (seed < 0)
        throw UsageError("seed must be non-negative");
    run.cfg.seed = static_cast<std::uint64_t>(seed);
    if (auto m = c.get("method")) {
        try {
            run.cfg.method = parse_smearing_method(*m);
        } catch (const DomainError& e) {
            throw UsageError(std::string("method: ") + e.what());
        }
    }
    run.cfg.quadrature_order = static_cast<int>(c.get_int("quadrature_order", run.cfg.quadrature_order));
    run.ell_factors = c.get_list("ell_factors", run.ell_factors);
    try {
        run.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return run;
}

RunConfig smeared_run_to_config(const SmearedRun& run) {
    RunConfig c;
    auto spec = [&](const std::string& p, const TestFunctionSpec& s) {
        c.set(p + "kind", test_function_kind_name(s.kind));
        c.set(p + "center", join({s.center[0], s.center[1], s.center[2], s.center[3]}));
        c.set(p + "sigma_t", format_double(s.temporal_width));
        c.set(p + "sigma_x", format_double(s.spatial_width));
        c.set(p + "amplitude", format_double(s.amplitude));
    };
    spec("s1.", run.s1);
    spec("s2.", run.s2);
    c.set("ell", format_double(run.cfg.ell));
    if (run.cfg.epsilon)
        c.set("epsilon", format_double(*run.cfg.epsilon));
    c.set("mc_samples", std::to_string(run.cfg.mc_samples));
    c.set("seed", std::to_string(run.cfg.seed));
    c.set("method", smearing_method_name(run.cfg.method));
    c.set("quadrature_order", std::to_string(run.cfg.quadrature_order));
    c.set("ell_factors", join(run.ell_factors));
    return c;
}

} // namespace negspec
