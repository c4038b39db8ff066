#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"
#include "negspec/kernels.hpp"
#include "negspec/modesum.hpp"
#include "negspec/run_config.hpp"
#include "negspec/smeared.hpp"
#include "negspec/table.hpp"
#include "negspec/thermal.hpp"
#include "negspec/verify.hpp"

namespace negspec::cli {

namespace {

struct Globals {
    std::string output;
    std::uint64_t seed = 20080417;
    bool quick = false;
    int threads = 1;
    std::string config;
};

// Writes to the --output file, or stdout when none was given.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_)
                throw UsageError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    bool to_file() const { return file_ != nullptr; }
    void finish() {
        stream().flush();
        if (!stream())
            throw Error("failed writing output");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

Metadata header(const std::string& command) {
    return {{"command", command}, {"negspec_version", version_string}};
}

std::string key_of(const CLI::Option* o) {
    const auto& names = o->get_lnames();
    if (names.empty())
        return {};
    std::string k = names.front();
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
}

// Fills options missing from the command line with config file values.
void apply_config(const RunConfig& cfg, const std::vector<CLI::App*>& apps,
                  const std::set<std::string>& extra) {
    std::set<std::string> allowed = extra;
    for (CLI::App* app : apps)
        for (CLI::Option* o : app->get_options()) {
            const std::string key = key_of(o);
            if (key.empty() || key == "help" || key == "config")
                continue;
            allowed.insert(key);
            if (o->count() != 0)
                continue;
            if (auto v = cfg.get(key)) {
                try {
                    o->add_result(*v);
                    o->run_callback();
                } catch (const CLI::Error& e) {
                    throw UsageError("config key '" + key + "': " + e.what());
                }
            }
        }
    cfg.require_known(allowed);
}

std::vector<double> linear_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return g;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

struct Fig1Args {
    double k = 1.0;
    double T_min = 0.2;
    double T_max = 3.0;
    int points = 200;
};

int cmd_fig1(const Fig1Args& a, const Globals& g) {
    if (!(a.k > 0.0) || !std::isfinite(a.k))
        throw UsageError("fig1: k must be positive");
    if (!(a.T_min > 0.0))
        throw UsageError("fig1: T_min must be positive");
    if (!std::isfinite(a.T_max))
        throw UsageError("fig1: T_max must be finite");
    if (a.T_min > a.T_max)
        throw UsageError("fig1: T_min must not exceed T_max");
    if (a.points < 1)
        throw UsageError("fig1: points must be at least 1");
    const auto T = linear_grid(a.T_min, a.T_max, a.points);
    const auto tables = fig1_table(a.k, T);
    CsvTable out;
    out.metadata = header("fig1");
    out.metadata.push_back({"k", format_double(a.k)});
    out.metadata.push_back({"T_min", format_double(a.T_min)});
    out.metadata.push_back({"T_max", format_double(a.T_max)});
    out.metadata.push_back({"points", std::to_string(a.points)});
    out.metadata.push_back({"crossover_T", format_double(crossover_temperature(a.k))});
    out.columns = {"T", "P0", "PT", "total"};
    for (std::size_t i = 0; i < T.size(); ++i)
        out.add_numeric_row(std::vector<double>{T[i], tables[0].rows[i].value, tables[1].rows[i].value,
                                                tables[2].rows[i].value});
    Output o(g.output);
    out.write(o.stream());
    o.finish();
    return exit_ok;
}

struct VerifyArgs {
    std::string suite;
};

int cmd_verify(const VerifyArgs& a, const Globals& g) {
    const verify::Suite suite = verify::parse_suite(a.suite);
    verify::Options opts;
    opts.quick = g.quick;
    opts.seed = g.seed;
    const verify::Report rep = verify::run_suite(suite, opts);
    Output o(g.output);
    verify::print_report(o.stream(), rep);
    o.finish();
    if (o.to_file())
        verify::print_report(std::cout, rep);
    return rep.passed() ? exit_ok : exit_verify_failed;
}

struct SpectrumArgs {
    std::string channel;
    double k_min = 0.1;
    double k_max = 10.0;
    int points = 100;
    bool log_spacing = false;
    double tau = 0.0;
    std::optional<double> beta;
    std::optional<double> temperature;
    std::optional<double> lP;
    std::optional<double> H;
    std::optional<double> S;
};

int cmd_spectrum(const SpectrumArgs& a, const Globals& g) {
    static const std::vector<std::string> channels{"scalar_vacuum", "em_vacuum", "thermal",
                                                   "total",         "temporal",  "inflation"};
    if (std::find(channels.begin(), channels.end(), a.channel) == channels.end())
        throw UsageError("spectrum: unknown channel '" + a.channel +
                         "' (scalar_vacuum, em_vacuum, thermal, total, temporal, inflation)");
    if (!(a.k_min > 0.0) || !(a.k_max >= a.k_min) || !std::isfinite(a.k_max))
        throw UsageError("spectrum: need 0 < k_min <= k_max");
    if (a.points < 1)
        throw UsageError("spectrum: points must be at least 1");

    CsvTable out;
    out.metadata = header("spectrum");
    out.metadata.push_back({"channel", a.channel});
    const auto grid = a.log_spacing ? log_grid(a.k_min, a.k_max, a.points)
                                    : linear_grid(a.k_min, a.k_max, a.points);
    std::function<double(double)> f;

    if (a.channel == "scalar_vacuum" || a.channel == "em_vacuum") {
        if (!std::isfinite(a.tau))
            throw UsageError("spectrum: tau must be finite");
        out.metadata.push_back({"tau", format_double(a.tau)});
        const bool em = a.channel == "em_vacuum";
        const double tau = a.tau;
        f = [em, tau](double k) { return em ? em_ft_kernel(tau, k) : scalar_ft_kernel(tau, k); };
    } else if (a.channel == "thermal" || a.channel == "total") {
        if (a.beta && a.temperature)
            throw UsageError("spectrum: give either --beta or --temperature, not both");
        if (!a.beta && !a.temperature)
            throw UsageError("spectrum: channel " + a.channel + " needs --beta or --temperature");
        std::optional<ThermalState> st;
        try {
            st = a.beta ? ThermalState(*a.beta) : ThermalState::from_temperature(*a.temperature);
        } catch (const DomainError& e) {
            throw UsageError(std::string("spectrum: ") + e.what());
        }
        out.metadata.push_back({"beta", format_double(st->beta)});
        const ThermalState s = *st;
        const bool total = a.channel == "total";
        f = [s, total](double k) { return total ? em_power_total(k, s) : thermal_power(k, s); };
    } else if (a.channel == "temporal") {
        f = temporal_power;
    } else {
        if (!a.lP || !a.H || !a.S)
            throw UsageError("spectrum: channel inflation needs --lP, --H and --S");
        const InflationParams p{*a.lP, *a.H, *a.S};
        try {
            p.validate();
        } catch (const DomainError& e) {
            throw UsageError(std::string("spectrum: ") + e.what());
        }
        out.metadata.push_back({"lP", format_double(p.lP)});
        out.metadata.push_back({"H", format_double(p.H)});
        out.metadata.push_back({"S", format_double(p.S)});
        out.metadata.push_back({"sign_change_wavenumber", format_double(sign_change_wavenumber(p))});
        f = [p](double k) { return inflation_power(k, p); };
    }
    out.columns = {a.channel == "temporal" ? "omega" : "k", "value"};
    for (double x : grid)
        out.add_numeric_row(std::vector<double>{x, f(x)});
    Output o(g.output);
    out.write(o.stream());
    o.finish();
    return exit_ok;
}

struct CrossoverArgs {
    std::vector<double> k{1.0};
};

int cmd_crossover(const CrossoverArgs& a, const Globals& g) {
    for (double k : a.k)
        if (!(k > 0.0) || !std::isfinite(k))
            throw UsageError("crossover: k must be positive");
    CsvTable out;
    out.metadata = header("crossover");
    out.columns = {"k", "T_c", "T_c_over_k", "closed_form"};
    for (double k : a.k) {
        const double t = crossover_temperature(k);
        out.add_numeric_row(std::vector<double>{k, t, t / k, crossover_temperature_closed_form(k)});
        std::cout << "k = " << format_double(k) << ": T_c = " << format_double(t)
                  << ", T_c/k = " << format_double(t / k) << '\n';
    }
    if (!g.output.empty()) {
        Output o(g.output);
        out.write(o.stream());
        o.finish();
    }
    return exit_ok;
}

struct ModesumArgs {
    double k = 1.0;
    std::vector<double> taus;
    std::vector<double> cutoffs{10.0, 20.0, 40.0, 80.0};
};

int cmd_modesum(const ModesumArgs& a, const Globals& g) {
    if (!(a.k > 0.0) || !std::isfinite(a.k))
        throw UsageError("modesum: k must be positive");
    std::vector<double> taus = a.taus.empty() ? default_tau_nodes() : a.taus;
    std::vector<double> cutoffs;
    for (double c : a.cutoffs) {
        if (!(c > 1.0))
            throw UsageError("modesum: cutoff multiples must exceed 1");
        cutoffs.push_back(c * a.k);
    }
    OrderOfLimitsReport rep;
    try {
        rep = order_of_limits_report(a.k, taus, cutoffs);
    } catch (const DomainError& e) {
        throw UsageError(std::string("modesum: ") + e.what());
    }
    std::cout << rep.summary();
    if (!g.output.empty()) {
        CsvTable t = rep.to_csv();
        Metadata m = header("modesum");
        m.insert(m.end(), t.metadata.begin(), t.metadata.end());
        t.metadata = m;
        Output o(g.output);
        t.write(o.stream());
        o.finish();
    }
    return exit_ok;
}

struct SmearedArgs {
    std::string file;
    std::vector<double> ell_factors;
    std::string method;
};

int cmd_smeared(const SmearedArgs& a, const Globals& g, const RunConfig& cfg) {
    RunConfig c = cfg;
    if (!a.ell_factors.empty()) {
        std::ostringstream s;
        for (std::size_t i = 0; i < a.ell_factors.size(); ++i)
            s << (i ? ", " : "") << format_double(a.ell_factors[i]);
        c.set("ell_factors", s.str());
    }
    if (!a.method.empty())
        c.set("method", a.method);
    c.set("seed", std::to_string(g.seed));
    const SmearedRun run = smeared_run_from_config(c);
    const EllScan scan = ell_invariance_scan(run.s1, run.s2, run.cfg, run.ell_factors, g.threads);
    CsvTable t = scan.to_csv();
    Metadata m = header("smeared");
    const RunConfig resolved = smeared_run_to_config(run);
    for (const auto& [k, v] : resolved.entries())
        m.push_back({k, v});
    m.insert(m.end(), t.metadata.begin(), t.metadata.end());
    t.metadata = m;
    Output o(g.output);
    t.write(o.stream());
    o.finish();
    if (o.to_file())
        std::cout << "max relative deviation over ell: " << format_double(scan.max_relative_deviation) << '\n';
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Negative power spectra toolkit", "negspec"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(version_string));

    Globals g;
    app.add_option("--output,-o", g.output, "Output file (default stdout)");
    app.add_option("--seed", g.seed, "Random seed")->check(CLI::NonNegativeNumber);
    app.add_flag("--quick", g.quick, "Reduced grids for verification");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 256));
    app.add_option("--config", g.config, "Flat key = value file; flags override it");

    Fig1Args fig1;
    CLI::App* s_fig1 = app.add_subcommand("fig1", "Vacuum, thermal and total power against temperature");
    s_fig1->add_option("--k", fig1.k, "Wavenumber");
    s_fig1->add_option("--T-min", fig1.T_min, "Lowest temperature");
    s_fig1->add_option("--T-max", fig1.T_max, "Highest temperature");
    s_fig1->add_option("--points", fig1.points, "Number of temperatures");

    VerifyArgs ver;
    CLI::App* s_verify = app.add_subcommand("verify", "Run a verification suite");
    s_verify->add_option("suite", ver.suite, "transforms, modesum, thermal, smeared or all")->required();

    SpectrumArgs spec;
    CLI::App* s_spec = app.add_subcommand("spectrum", "Tabulate a power spectrum channel");
    s_spec->add_option("channel", spec.channel,
                       "scalar_vacuum, em_vacuum, thermal, total, temporal or inflation")
        ->required();
    s_spec->add_option("--k-min", spec.k_min, "First abscissa");
    s_spec->add_option("--k-max", spec.k_max, "Last abscissa");
    s_spec->add_option("--points", spec.points, "Number of abscissae");
    s_spec->add_flag("--log", spec.log_spacing, "Logarithmic spacing");
    s_spec->add_option("--tau", spec.tau, "Time separation for the vacuum kernels");
    s_spec->add_option("--beta", spec.beta, "Inverse temperature");
    s_spec->add_option("--temperature", spec.temperature, "Temperature");
    s_spec->add_option("--lP", spec.lP, "Planck length");
    s_spec->add_option("--H", spec.H, "Hubble rate");
    s_spec->add_option("--S", spec.S, "Smearing scale");

    CrossoverArgs cross;
    CLI::App* s_cross = app.add_subcommand("crossover", "Temperature where the total power changes sign");
    s_cross->add_option("--k", cross.k, "Wavenumbers")->delimiter(',');

    ModesumArgs ms;
    CLI::App* s_ms = app.add_subcommand("modesum", "Order of limits report for the regulated mode sum");
    s_ms->add_option("--k", ms.k, "Wavenumber");
    s_ms->add_option("--taus", ms.taus, "Time separations")->delimiter(',');
    s_ms->add_option("--cutoffs", ms.cutoffs, "Cutoffs in units of the lattice spacing")->delimiter(',');

    SmearedArgs sm;
    CLI::App* s_sm = app.add_subcommand("smeared", "Smeared observable and its ell scan");
    s_sm->add_option("file", sm.file, "Configuration file");
    s_sm->add_option("--ell-factors", sm.ell_factors, "Factors applied to ell")->delimiter(',');
    s_sm->add_option("--method", sm.method, "reduced or monte_carlo");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        std::string config_path = g.config;
        if (sub == s_sm && !sm.file.empty()) {
            if (!config_path.empty())
                throw UsageError("smeared: give the configuration either positionally or with --config");
            config_path = sm.file;
        }
        RunConfig cfg;
        if (!config_path.empty())
            cfg = RunConfig::load(config_path);
        if (sub == s_sm) {
            // the smeared keys describe the run itself; only the global flags come from apply_config
            RunConfig globals_only, rest;
            for (const auto& [k, v] : cfg.entries()) {
                if (k == "output" || k == "quick" || k == "threads")
                    globals_only.set(k, v);
                else
                    rest.set(k, v);
            }
            apply_config(globals_only, {&app}, {});
            if (rest.has("seed") && app.get_option("--seed")->count() == 0)
                g.seed = static_cast<std::uint64_t>(parse_int(*rest.get("seed"), "seed"));
            return cmd_smeared(sm, g, rest);
        }
        apply_config(cfg, {&app, sub}, {});
        if (sub == s_fig1)
            return cmd_fig1(fig1, g);
        if (sub == s_verify)
            return cmd_verify(ver, g);
        if (sub == s_spec)
            return cmd_spectrum(spec, g);
        if (sub == s_cross)
            return cmd_crossover(cross, g);
        if (sub == s_ms)
            return cmd_modesum(ms, g);
        throw UsageError("no command");
    } catch (const UsageError& e) {
        std::cerr << "negspec: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        std::cerr << "negspec: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "negspec: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace negspec::cli
