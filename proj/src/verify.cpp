#include "negspec/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"
#include "negspec/kernels.hpp"
#include "negspec/modesum.hpp"
#include "negspec/regquad.hpp"
#include "negspec/smeared.hpp"
#include "negspec/spectra.hpp"
#include "negspec/thermal.hpp"

namespace negspec::verify {

namespace {

double rel_diff(double a, double b) {
    const double den = std::max(std::abs(a), std::abs(b));
    return den == 0.0 ? 0.0 : std::abs(a - b) / den;
}

Check at_most(std::string name, double measured, double tolerance, std::string note = {}) {
    Check c;
    c.name = std::move(name);
    c.measured = measured;
    c.expected = 0.0;
    c.tolerance = tolerance;
    c.relation = Relation::at_most;
    c.passed = std::isfinite(measured) && measured <= tolerance;
    c.note = std::move(note);
    return c;
}

Check near(std::string name, double measured, double expected, double tolerance, std::string note = {}) {
    Check c;
    c.name = std::move(name);
    c.measured = measured;
    c.expected = expected;
    c.tolerance = tolerance;
    c.passed = std::isfinite(measured) && std::abs(measured - expected) <= tolerance;
    c.note = std::move(note);
    return c;
}

Check bound(std::string name, double measured, Relation rel, double limit, std::string note = {}) {
    Check c;
    c.name = std::move(name);
    c.measured = measured;
    c.expected = limit;
    c.relation = rel;
    c.passed = rel == Relation::below ? measured < limit : measured > limit;
    c.note = std::move(note);
    return c;
}

Check info(std::string name, double measured, double expected, std::string note = {}) {
    Check c;
    c.name = std::move(name);
    c.measured = measured;
    c.expected = expected;
    c.passed = true;
    c.gated = false;
    c.note = std::move(note);
    return c;
}

Report timed(const std::function<void(Report&)>& body) {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        Check c;
        c.name = "exception";
        c.note = e.what();
        r.checks.push_back(c);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Report check_inverse(const Options& opts, const char* label, const FourierKernel& kernel,
                     double (*closed)(const SpacetimeSeparation&), double tol) {
    return timed([&](Report& r) {
        const std::vector<double> full{0.5, 0.8, 1.2, 1.6, 2.0};
        const std::vector<double> small{0.5, 1.2, 2.0};
        const auto& grid = opts.quick ? small : full;
        double worst = 0.0;
        std::string where;
        int points = 0;
        for (double tau : grid)
            for (double rr : grid) {
                if (std::abs(rr - tau) < 0.2)
                    continue;
                const SpacetimeSeparation sep{tau, rr};
                const double e = rel_diff(inverse_spatial_ft(kernel, sep), closed(sep));
                ++points;
                if (e >= worst) {
                    worst = e;
                    where = "tau=" + fmt("%g", tau) + " r=" + fmt("%g", rr);
                }
            }
        r.checks.push_back(at_most(std::string(label) + " inverse transform max relative error", worst, tol,
                                   std::to_string(points) + " points, worst at " + where));
    });
}

} // namespace

const char* suite_name(Suite s) {
    switch (s) {
    case Suite::transforms: return "transforms";
    case Suite::modesum: return "modesum";
    case Suite::thermal: return "thermal";
    case Suite::smeared: return "smeared";
    case Suite::all: return "all";
    }
    return "?";
}

Suite parse_suite(const std::string& name) {
    for (Suite s : {Suite::transforms, Suite::modesum, Suite::thermal, Suite::smeared, Suite::all})
        if (name == suite_name(s))
            return s;
    throw UsageError("unknown suite '" + name + "' (transforms, modesum, thermal, smeared, all)");
}

bool Report::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return !c.gated || c.passed; });
}

void Report::append(const Report& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    seconds += other.seconds;
}

std::string format_check(const Check& c) {
    std::string s = c.gated ? (c.passed ? "PASS " : "FAIL ") : "INFO ";
    s += c.name;
    s += ": measured=" + fmt("%.10g", c.measured);
    if (!c.gated)
        s += " reference=" + fmt("%.10g", c.expected);
    else if (c.relation == Relation::within)
        s += " expected=" + fmt("%.10g", c.expected) + " tol=" + fmt("%.3g", c.tolerance);
    else if (c.relation == Relation::at_most)
        s += " required<=" + fmt("%.3g", c.tolerance);
    else
        s += std::string(" required") + (c.relation == Relation::below ? "<" : ">") + fmt("%.10g", c.expected);
    if (!c.note.empty())
        s += " (" + c.note + ")";
    return s;
}

void print_report(std::ostream& os, const Report& r) {
    for (const Check& c : r.checks)
        os << format_check(c) << '\n';
    std::size_t failed = 0, gated = 0;
    for (const Check& c : r.checks) {
        gated += c.gated ? 1 : 0;
        failed += c.gated && !c.passed ? 1 : 0;
    }
    os << (failed == 0 ? "ALL PASS" : "FAILED") << ": " << gated - failed << "/" << gated
       << " checks in " << fmt("%.2f", r.seconds) << " s\n";
}

Report check_crossover(const Options&) {
    return timed([](Report& r) {
        for (double k : {0.5, 1.0, 2.0}) {
            const double t = crossover_temperature(k);
            r.checks.push_back(near("crossover T/k at k=" + fmt("%g", k), t / k, 1.0390, 1e-3));
        }
        const double t = crossover_temperature(1.0);
        r.checks.push_back(at_most("crossover matches golden ratio form",
                                   rel_diff(t, crossover_temperature_closed_form(1.0)), 1e-10));
    });
}

Report check_fig1(const Options&) {
    return timed([](Report& r) {
        const double k = 1.0;
        std::vector<double> T(200);
        for (std::size_t i = 0; i < T.size(); ++i)
            T[i] = 0.2 + (3.0 - 0.2) * static_cast<double>(i) / 199.0;
        const auto tables = fig1_table(k, T);
        double max_p0 = -INFINITY, min_pt = INFINITY;
        for (const auto& s : tables[0].rows)
            max_p0 = std::max(max_p0, s.value);
        for (const auto& s : tables[1].rows)
            min_pt = std::min(min_pt, s.value);
        int changes = 0;
        double where = NAN;
        const auto& tot = tables[2].rows;
        for (std::size_t i = 0; i + 1 < tot.size(); ++i)
            if ((tot[i].value < 0.0) != (tot[i + 1].value < 0.0)) {
                ++changes;
                const double a = tot[i].value, b = tot[i + 1].value;
                where = tot[i].k + (tot[i + 1].k - tot[i].k) * a / (a - b);
            }
        r.checks.push_back(bound("fig1 max vacuum power", max_p0, Relation::below, 0.0));
        r.checks.push_back(bound("fig1 min thermal power", min_pt, Relation::above, 0.0));
        r.checks.push_back(near("fig1 sign changes of total", changes, 1.0, 0.0));
        r.checks.push_back(near("fig1 sign change T/k", where / k, 1.04, 0.01));
    });
}

Report check_inverse_scalar(const Options& opts) {
    return check_inverse(opts, "scalar", scalar_ft_kernel, scalar_corr, 1e-4);
}

Report check_inverse_em(const Options& opts) {
    return check_inverse(opts, "em", em_ft_kernel, em_corr, 1e-3);
}

Report check_thermal_forward(const Options& opts) {
    return timed([&](Report& r) {
        const ThermalState state(1.0);
        const RealFunction corr = [&](double u) { return thermal_corr_imagesum(u, state); };
        double worst = 0.0;
        for (double k : {0.5, 1.0, 2.0, 5.0})
            worst = std::max(worst, rel_diff(forward_spatial_ft(corr, k), thermal_power(k, state)));
        r.checks.push_back(at_most("thermal forward transform max relative error", worst, 1e-6,
                                   "k in {0.5, 1, 2, 5}, beta=1"));
        const int n = opts.quick ? 12 : 100;
        double lowest = INFINITY;
        for (int i = 0; i < n; ++i) {
            const double k = 0.1 * std::pow(100.0, static_cast<double>(i) / (n - 1));
            lowest = std::min(lowest, forward_spatial_ft(corr, k));
        }
        r.checks.push_back(bound("thermal forward transform minimum", lowest, Relation::above, 0.0,
                                 std::to_string(n) + " k in [0.1, 10]"));
    });
}

Report check_order_of_limits(const Options&) {
    return timed([](Report& r) {
        const double k = 1.0;
        const auto rep = order_of_limits_report(k, default_tau_nodes(), {10.0, 20.0, 40.0, 80.0});
        r.checks.push_back(near("tau=0 lattice log-log slope", rep.tau0_scan.log_log_slope, 1.0, 0.1,
                                "cutoffs 10, 20, 40, 80 (2 pi / L)"));
        Check div = near("tau=0 continuum limit diverges", rep.tau0_continuum_diverged ? 1.0 : 0.0, 1.0, 0.0,
                         rep.tau0_continuum_message);
        r.checks.push_back(div);
        for (const auto& row : rep.continuum)
            if (row.tau == 0.5 || row.tau == 1.0)
                r.checks.push_back(at_most("continuum coefficient at tau=" + fmt("%g", row.tau),
                                           row.relative_error, 1e-3,
                                           "value " + fmt("%.12g", row.value)));
        r.checks.push_back(at_most("tau -> 0 limit of continuum coefficient", rep.tau_limit_relative_error,
                                   1e-3, "limit " + fmt("%.12g", rep.tau_limit) + ", reference " +
                                             fmt("%.12g", rep.tau_limit_reference)));
        r.checks.push_back(info("difference phase extrapolation diverges",
                                rep.difference_phase_diverged ? 1.0 : 0.0, 1.0));
    });
}

Report check_smeared(const Options& opts) {
    return timed([&](Report& r) {
        SmearingConfig cfg;
        cfg.seed = opts.seed;
        if (opts.quick)
            cfg.quadrature_order = 12;
        const TestFunctionSpec g;
        const auto scan = ell_invariance_scan(g, g, cfg, {1.0, 2.0, 5.0});
        r.checks.push_back(at_most("ell scan max relative deviation", scan.max_relative_deviation, 1e-2,
                                   "factors 1, 2, 5; K=" + fmt("%.15g", scan.rows.front().K.value)));
        r.checks.push_back(at_most("unit gaussian K against reference",
                                   rel_diff(scan.rows.front().K.value, 0.003254051879007186), 1e-6));

        SmearingConfig mc = cfg;
        mc.method = SmearingMethod::monte_carlo;
        const auto mscan = ell_invariance_scan(g, g, mc, {1.0, 2.0, 5.0});
        r.checks.push_back(info("monte carlo ell scan max relative deviation", mscan.max_relative_deviation,
                                0.0,
                                fmt("%g", static_cast<double>(mc.mc_samples)) + " samples, K=" +
                                    fmt("%.4g", mscan.rows.front().K.value) + " +- " +
                                    fmt("%.2g", mscan.rows.front().K.error_estimate)));

        TestFunctionSpec a;
        a.kind = TestFunctionKind::compact_bump;
        a.temporal_width = 0.25;
        a.spatial_width = 0.25;
        TestFunctionSpec b = a;
        b.center = {0.3, 5.0, 0.0, 0.0};
        const double k = smeared_K(a, b, cfg).value;
        const double direct = direct_smeared_reduced(a, b).value;
        r.checks.push_back(at_most("disjoint bumps K against direct integral", rel_diff(k, direct), 1e-2,
                                   "D=5, R=W=1, dt=0.3; K=" + fmt("%.12g", k)));
        const auto dmc = direct_smeared_mc(a, b, cfg.mc_samples, cfg.seed);
        r.checks.push_back(info("disjoint bumps direct monte carlo", dmc.value, direct,
                                "standard error " + fmt("%.3g", dmc.error_estimate)));
    });
}

Report check_temporal(const Options&) {
    return timed([](Report& r) {
        const std::vector<double> omegas{1.0, 1.5, 2.0, 3.0, 4.0};
        std::vector<double> p;
        for (double w : omegas)
            p.push_back(temporal_ft(em_corr_at_origin, w));
        const PowerLawFit fit = fit_power_law(omegas, p);
        r.checks.push_back(near("temporal spectrum exponent", fit.exponent, 7.0, 0.05));
        r.checks.push_back(bound("temporal spectrum coefficient", fit.coefficient, Relation::above, 0.0));
        r.checks.push_back(info("temporal coefficient vs 1/(560 pi^2)", fit.coefficient, 1.0 / (560.0 * pi2)));
        r.checks.push_back(info("temporal coefficient vs 1/(840 pi^3)", fit.coefficient, 1.0 / (840.0 * pi2 * pi)));
    });
}

Report check_band_limit(const Options& opts) {
    return timed([&](Report& r) {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        int mismatches = 0;
        const int trials = opts.quick ? 50 : 200;
        for (int i = 0; i < trials; ++i) {
            const double c0 = U(rng) * 4.0 - 2.0, c1 = U(rng) * 4.0 - 2.0, c2 = U(rng) * 4.0 - 2.0;
            const RealFunction P = [=](double q) { return c0 + c1 * q + c2 * std::sin(3.0 * q); };
            const RealFunction N = [&](double q) { return -P(q); };
            const double k0 = U(rng) * 3.0;
            const BandLimit band{k0, k0 + 0.1 + U(rng) * 3.0};
            const double rr = i % 10 == 0 ? 1e-9 : U(rng) * 20.0;
            if (band_limited_corr(N, band, rr) != -band_limited_corr(P, band, rr))
                ++mismatches;
        }
        r.checks.push_back(near("band limited negation is exact", mismatches, 0.0, 0.0,
                                std::to_string(trials) + " random spectra, bands and r"));

        const RealFunction P = [](double q) { return em_ft_kernel(0.0, q); };
        const RealFunction N = [&](double q) { return -P(q); };
        std::vector<double> grid(opts.quick ? 800 : 2000);
        for (std::size_t i = 0; i < grid.size(); ++i)
            grid[i] = 0.1 + (20.0 - 0.1) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
        const BandLimit band{1.0, 2.0};
        const auto a = extremum_interchange_report(P, band, grid);
        const auto b = extremum_interchange_report(N, band, grid);
        int bad = a.size() == b.size() && !a.empty() ? 0 : 1;
        for (std::size_t i = 0; bad == 0 && i < a.size(); ++i)
            if (a[i].r != b[i].r || a[i].kind == b[i].kind)
                ++bad;
        r.checks.push_back(near("extremum labels swap under P -> -P", bad, 0.0, 0.0,
                                std::to_string(a.size()) + " extrema on r in [0.1, 20]"));
    });
}

Report check_invariants(const Options& opts) {
    return timed([&](Report& r) {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const int n = opts.quick ? 50 : 200;

        double scaling = 0.0, parity = 0.0;
        for (int i = 0; i < n; ++i) {
            const double tau = 0.1 + 3.0 * U(rng), rr = 0.1 + 3.0 * U(rng), lam = 0.2 + 4.0 * U(rng);
            if (std::abs(rr - tau) < 1e-3)
                continue;
            const SpacetimeSeparation s{tau, rr}, sl{lam * tau, lam * rr}, sm{-tau, rr};
            scaling = std::max(scaling, rel_diff(scalar_corr(sl), std::pow(lam, -4.0) * scalar_corr(s)));
            scaling = std::max(scaling, rel_diff(em_corr(sl), std::pow(lam, -8.0) * em_corr(s)));
            parity = std::max(parity, rel_diff(scalar_corr(sm), scalar_corr(s)));
            parity = std::max(parity, rel_diff(em_corr(sm), em_corr(s)));
            const double k = 0.1 + 5.0 * U(rng);
            parity = std::max(parity, rel_diff(em_ft_kernel(-tau, k), em_ft_kernel(tau, k)));
        }
        r.checks.push_back(at_most("correlator scaling", scaling, 1e-12));
        r.checks.push_back(at_most("time reversal parity", parity, 0.0));

        double tscale = 0.0, vac_sign = 0.0, th_sign = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = 0.05 + 10.0 * U(rng), beta = 0.05 + 5.0 * U(rng), lam = 0.2 + 4.0 * U(rng);
            tscale = std::max(tscale, rel_diff(thermal_power(lam * k, ThermalState(beta / lam)),
                                               std::pow(lam, 5.0) * thermal_power(k, ThermalState(beta))));
            if (!(em_ft_kernel(0.0, k) < 0.0))
                vac_sign += 1.0;
            if (!(thermal_power(k, ThermalState(beta)) > 0.0))
                th_sign += 1.0;
        }
        r.checks.push_back(at_most("thermal power scaling", tscale, 1e-12));
        r.checks.push_back(near("vacuum power negative", vac_sign, 0.0, 0.0));
        r.checks.push_back(near("thermal power positive", th_sign, 0.0, 0.0));

        double kscale = 0.0, partial_bad = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = 0.05 + 10.0 * U(rng), lam = 0.2 + 4.0 * U(rng);
            kscale = std::max(kscale, rel_diff(em_ft_kernel(0.0, lam * k), std::pow(lam, 5.0) * em_ft_kernel(0.0, k)));
            kscale = std::max(kscale, rel_diff(scalar_ft_kernel(0.0, lam * k), lam * scalar_ft_kernel(0.0, k)));
            if (!(scalar_ft_kernel(0.0, k) < 0.0))
                vac_sign += 1.0;
            const auto terms = thermal_power_image_decomposition(k, ThermalState(0.05 + 5.0 * U(rng)), 30);
            double partial = 0.0;
            for (double t : terms) {
                partial += t;
                if (!(partial > 0.0))
                    partial_bad += 1.0;
            }
        }
        r.checks.push_back(at_most("vacuum spectra scale as k^5 and k", kscale, 1e-13));
        r.checks.push_back(near("scalar vacuum power negative", vac_sign, 0.0, 0.0));
        r.checks.push_back(near("partial image sums positive", partial_bad, 0.0, 0.0));

        int not_increasing = 0;
        const int grid_n = opts.quick ? 40 : 100;
        for (int i = 0; i < grid_n; ++i) {
            const double k = 0.1 + (10.0 - 0.1) * i / (grid_n - 1);
            double prev = 0.0;
            for (int j = 0; j < grid_n; ++j) {
                const double T = 0.1 + (10.0 - 0.1) * j / (grid_n - 1);
                const double p = thermal_power(k, ThermalState::from_temperature(T));
                if (j > 0 && !(p > prev))
                    ++not_increasing;
                prev = p;
            }
        }
        r.checks.push_back(near("thermal power increases with T", not_increasing, 0.0, 0.0,
                                "k, T in [0.1, 10]"));

        int one_change = 0;
        for (int i = 0; i < (opts.quick ? 5 : 20); ++i) {
            const double k = 0.1 + 10.0 * U(rng);
            int changes = 0;
            double prev = em_power_total(k, ThermalState::from_temperature(0.5 * k));
            for (int j = 1; j < 1000; ++j) {
                const double T = k * (0.5 + 1.5 * j / 999.0);
                const double p = em_power_total(k, ThermalState::from_temperature(T));
                if ((p > 0.0) != (prev > 0.0))
                    ++changes;
                prev = p;
            }
            if (changes != 1)
                ++one_change;
        }
        r.checks.push_back(near("single sign change of the total power", one_change, 0.0, 0.0,
                                "T in [0.5k, 2k], 1000 nodes"));

        double cscale = 0.0, image = 0.0;
        for (int i = 0; i < (opts.quick ? 5 : 20); ++i) {
            const double k = 0.2 + 5.0 * U(rng), lam = 0.5 + 2.0 * U(rng);
            cscale = std::max(cscale, rel_diff(crossover_temperature(lam * k), lam * crossover_temperature(k)));
            const double rr = 0.05 + 3.0 * U(rng), beta = 0.5 + 2.0 * U(rng);
            image = std::max(image, rel_diff(thermal_corr_imagesum(lam * rr, ThermalState(lam * beta)),
                                             std::pow(lam, -8.0) *
                                                 thermal_corr_imagesum(rr, ThermalState(beta))));
        }
        r.checks.push_back(at_most("crossover scales with k", cscale, 1e-9));
        r.checks.push_back(at_most("image sum scaling", image, 1e-10));

        double cont = 0.0;
        for (double x : {series_tol, -series_tol}) {
            const double below = sinc(std::nextafter(x, 0.0)), above = sinc(x);
            cont = std::max(cont, std::abs(below - above));
        }
        r.checks.push_back(at_most("sinc continuity at the series switch", cont, 1e-15));

        double poly = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double a0 = U(rng) - 0.5, a1 = U(rng) - 0.5, a2 = U(rng) - 0.5;
            const auto sched = RegulatorSchedule::standard();
            const RealFunction f = [=](double x) { return a0 + a1 * x + a2 * x * x; };
            poly = std::max(poly, std::abs(abel_limit(f, sched).value - a0));
        }
        r.checks.push_back(at_most("regulator limit exact on polynomials", poly, 1e-12));

        ModeSumConfig cfg;
        cfg.cutoff = 8.0;
        double sym = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double tau = 0.1 + U(rng);
            const double base = discrete_mode_corr(cfg, tau, 0.5);
            sym = std::max(sym, rel_diff(base, discrete_mode_corr(cfg, -tau, 0.5)));
            for (auto idx : {std::array<int, 3>{0, 1, 0}, std::array<int, 3>{0, 0, -1},
                             std::array<int, 3>{-1, 0, 0}}) {
                ModeSumConfig c2 = cfg;
                c2.k_index = idx;
                sym = std::max(sym, rel_diff(base, discrete_mode_corr(c2, tau, 0.5)));
            }
        }
        r.checks.push_back(at_most("mode sum lattice symmetry", sym, 1e-12));

        double lattice_min = 1.0;
        for (double cut : {2.0, 5.0, 9.0}) {
            ModeSumConfig c0 = cfg;
            c0.cutoff = cut;
            lattice_min = std::min(lattice_min, discrete_mode_corr(c0, 0.0));
        }
        r.checks.push_back(bound("lattice sum at tau = 0 positive", lattice_min, Relation::above, 0.0));

        double linear = 0.0, small_r = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double c0 = 0.5 + U(rng), c1 = U(rng), w = U(rng) * 3.0;
            const RealFunction P1 = [=](double q) { return c0 + c1 * q; };
            const RealFunction P2 = [=](double q) { return std::cos(w * q); };
            const RealFunction sum = [&](double q) { return 2.0 * P1(q) - 3.0 * P2(q); };
            const BandLimit band{U(rng), 1.5 + U(rng)};
            const double rr = 0.05 + 5.0 * U(rng);
            const double lhs = band_limited_corr(sum, band, rr);
            const double rhs = 2.0 * band_limited_corr(P1, band, rr) - 3.0 * band_limited_corr(P2, band, rr);
            linear = std::max(linear, std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300));
            const double at0 = band_limited_corr(P1, band, 0.0);
            small_r = std::max(small_r, rel_diff(band_limited_corr(P1, band, 2e-6 / band.k1), at0));
        }
        r.checks.push_back(at_most("band limited correlator linear", linear, 1e-12));
        r.checks.push_back(at_most("band limited correlator continuous at r = 0", small_r, 1e-8));

        TestFunctionSpec a;
        a.kind = TestFunctionKind::compact_bump;
        a.temporal_width = 0.25;
        a.spatial_width = 0.25;
        TestFunctionSpec b = a;
        b.center = {0.3, 5.0, 0.0, 0.0};
        const SmearingConfig sc;
        const auto kab = smeared_K(a, b, sc), kba = smeared_K(b, a, sc);
        r.checks.push_back(near("smeared K symmetric", kba.value, kab.value, 0.0));
        TestFunctionSpec a2 = a;
        a2.amplitude = 2.5;
        r.checks.push_back(at_most("smeared K bilinear", rel_diff(smeared_K(a2, b, sc).value, 2.5 * kab.value),
                                   1e-14));
        TestFunctionSpec as = a, bs = b;
        for (std::size_t d = 0; d < 4; ++d) {
            const double shift = U(rng) - 0.5;
            as.center[d] += shift;
            bs.center[d] += shift;
        }
        const auto shifted = smeared_K(as, bs, sc);
        r.checks.push_back(at_most("smeared K translation invariant", std::abs(shifted.value - kab.value),
                                   2.0 * (shifted.error_estimate + kab.error_estimate) + 1e-12 * std::abs(kab.value)));

        const BoxFunction f = [](std::span<const double> u) { return u[0] * u[0] + u[1]; };
        const std::vector<Interval> box(2, Interval{0.0, 1.0});
        const double se1 = mc_integrate(f, box, 10000, opts.seed).error_estimate;
        const double se2 = mc_integrate(f, box, 1000000, opts.seed).error_estimate;
        r.checks.push_back(near("monte carlo error scales as 1/sqrt(N)", se1 / se2, 10.0, 1.0));
    });
}

Report run_suite(Suite s, const Options& opts) {
    Report r;
    switch (s) {
    case Suite::transforms:
        r.append(check_inverse_scalar(opts));
        r.append(check_inverse_em(opts));
        r.append(check_thermal_forward(opts));
        r.append(check_temporal(opts));
        r.append(check_band_limit(opts));
        break;
    case Suite::modesum:
        r.append(check_order_of_limits(opts));
        break;
    case Suite::thermal:
        r.append(check_crossover(opts));
        r.append(check_fig1(opts));
        break;
    case Suite::smeared:
        r.append(check_smeared(opts));
        break;
    case Suite::all:
        for (Suite t : {Suite::thermal, Suite::transforms, Suite::modesum, Suite::smeared})
            r.append(run_suite(t, opts));
        r.append(check_invariants(opts));
        break;
    }
    return r;
}

} // namespace negspec::verify
