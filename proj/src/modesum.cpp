#include "negspec/modesum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"
#include "negspec/kernels.hpp"
#include "negspec/simd/dispatch.hpp"

namespace negspec {

double ModeSumConfig::spacing() const { return 2.0 * pi / box_side; }

double ModeSumConfig::k_magnitude() const {
    const double a = k_index[0], b = k_index[1], c = k_index[2];
    return spacing() * std::sqrt(a * a + b * b + c * c);
}

void ModeSumConfig::validate() const {
    if (!(box_side > 0.0) || !std::isfinite(box_side))
        throw DomainError("ModeSumConfig: box side must be positive");
    if (!(cutoff >= spacing() * (1.0 - 1e-12)) || !std::isfinite(cutoff))
        throw DomainError("ModeSumConfig: cutoff must be at least 2 pi / L");
    if (k_magnitude() > cutoff * (1.0 + 1e-12))
        throw DomainError("ModeSumConfig: |k| must not exceed the cutoff");
}

namespace {

// Lattice points with |n| <= nmax grouped into shells of equal |n|^2.
struct Shells {
    std::vector<double> x, y, z;
    std::vector<std::size_t> offsets; // shell s occupies [offsets[s], offsets[s+1])
};

Shells build_shells(double nmax) {
    const auto limit = static_cast<long>(std::floor(nmax * nmax + 1e-9));
    const auto n = static_cast<int>(std::floor(nmax + 1e-12));
    std::vector<std::size_t> count(static_cast<std::size_t>(limit) + 2, 0);
    for (int a = -n; a <= n; ++a)
        for (int b = -n; b <= n; ++b)
            for (int c = -n; c <= n; ++c) {
                const long s = long(a) * a + long(b) * b + long(c) * c;
                if (s <= limit)
                    ++count[static_cast<std::size_t>(s) + 1];
            }
    Shells sh;
    std::vector<std::size_t> start(count.size(), 0);
    for (std::size_t i = 1; i < count.size(); ++i)
        start[i] = start[i - 1] + count[i];
    const std::size_t total = start.back();
    sh.x.resize(total);
    sh.y.resize(total);
    sh.z.resize(total);
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (int a = -n; a <= n; ++a)
        for (int b = -n; b <= n; ++b)
            for (int c = -n; c <= n; ++c) {
                const long s = long(a) * a + long(b) * b + long(c) * c;
                if (s > limit)
                    continue;
                const std::size_t at = fill[static_cast<std::size_t>(s)]++;
                sh.x[at] = a;
                sh.y[at] = b;
                sh.z[at] = c;
            }
    for (std::size_t i = 0; i + 1 < start.size(); ++i)
        if (start[i + 1] > start[i] || i == 0)
            sh.offsets.push_back(start[i]);
    sh.offsets.push_back(total);
    sh.offsets.erase(std::unique(sh.offsets.begin(), sh.offsets.end()), sh.offsets.end());
    return sh;
}

} // namespace

double discrete_mode_corr(const ModeSumConfig& cfg, double tau, double alpha) {
    cfg.validate();
    if (!std::isfinite(tau))
        throw DomainError("discrete_mode_corr: tau must be finite");
    if (!(alpha >= 0.0))
        throw DomainError("discrete_mode_corr: alpha must be non-negative");
    const double h = cfg.spacing();
    const Shells sh = build_shells(cfg.cutoff / h);

    simd::ModeTermParams p;
    p.spacing = h;
    p.kx = cfg.k_index[0];
    p.ky = cfg.k_index[1];
    p.kz = cfg.k_index[2];
    p.tau = tau;
    p.alpha = alpha;
    p.phase_sign = cfg.phase == ModePhase::sum ? 1.0 : -1.0;

    std::vector<double> buf;
    NeumaierSum total;
    for (std::size_t s = 0; s + 1 < sh.offsets.size(); ++s) {
        const std::size_t a = sh.offsets[s], b = sh.offsets[s + 1];
        buf.resize(b - a);
        simd::mode_terms(sh.x.data() + a, sh.y.data() + a, sh.z.data() + a, b - a, p, buf.data());
        total.add(pairwise_sum(buf));
    }
    const double norm = 2.0 * std::pow(2.0 * pi, 6);
    return total.value() / norm;
}

DivergenceScan divergence_scan(const ModeSumConfig& base, double tau,
                               const std::vector<double>& cutoffs) {
    if (cutoffs.empty())
        throw DomainError("divergence_scan: empty cutoff list");
    DivergenceScan scan;
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (i > 0 && !(cutoffs[i] > cutoffs[i - 1]))
            throw DomainError("divergence_scan: cutoffs must increase");
        ModeSumConfig cfg = base;
        cfg.cutoff = cutoffs[i];
        scan.rows.push_back({cutoffs[i], discrete_mode_corr(cfg, tau)});
    }
    if (scan.rows.size() >= 2) {
        std::vector<double> x, y;
        bool positive = true;
        for (const auto& r : scan.rows) {
            x.push_back(std::log(r.cutoff));
            y.push_back(std::log(std::abs(r.value)));
            positive = positive && r.value > 0.0;
        }
        const double n = static_cast<double>(x.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sx += x[i];
            sy += y[i];
            sxx += x[i] * x[i];
            sxy += x[i] * y[i];
        }
        scan.log_log_slope = positive ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    }
    return scan;
}

double continuum_mode_regulated(double k, double tau, double alpha, ModePhase phase) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("continuum_mode_regulated: k must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("continuum_mode_regulated: alpha must be positive");
    const double norm = 2.0 * std::pow(2.0 * pi, 6);

    if (tau == 0.0) {
        // angular integral gives 2 min(q, k)
        const double ak = alpha * k;
        const double head = 2.0 * (-std::expm1(-ak) - ak * std::exp(-ak)) / (alpha * alpha);
        const double tail = 2.0 * k * std::exp(-ak) / alpha;
        return 2.0 * pi / k * (head + tail) / norm;
    }

    IntegrationOptions io;
    io.abs_tol = 0.0;
    io.rel_tol = 1e-13;
    const double skt = std::sin(k * tau);
    const double decay = std::exp(-alpha * k);
    double head = 0.0;
    double tail = 0.0;
    if (phase == ModePhase::sum) {
        // sin((2q + k) tau) - sin(k tau), written without cancellation
        head = integrate(
                   [=](double q) {
                       return 2.0 * std::exp(-alpha * q) * std::cos((q + k) * tau) * std::sin(q * tau);
                   },
                   0.0, k, io)
                   .value;
        // int_k^inf cos(2 q tau) exp(-alpha q) dq
        const double w = 2.0 * tau;
        tail = 2.0 * skt * decay * (alpha * std::cos(w * k) - w * std::sin(w * k)) /
               (alpha * alpha + w * w);
    } else {
        head = integrate(
                   [=](double q) {
                       return 2.0 * std::exp(-alpha * q) * std::cos((k - q) * tau) * std::sin(q * tau);
                   },
                   0.0, k, io)
                   .value;
        tail = 2.0 * skt * decay / alpha;
    }
    return 2.0 * pi / (k * tau) * (head + tail) / norm;
}

RegulatorSchedule default_mode_schedule(double tau) {
    if (tau == 0.0)
        return RegulatorSchedule::standard();
    return RegulatorSchedule::geometric(0.2 * std::abs(tau), 0.5, 5, 4);
}

double continuum_mode_coefficient(double k, double tau,
                                  const std::optional<RegulatorSchedule>& schedule,
                                  ModePhase phase) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("continuum_mode_coefficient: k must be positive");
    const RegulatorSchedule sch = schedule ? *schedule : default_mode_schedule(tau);
    return abel_limit([&](double a) { return continuum_mode_regulated(k, tau, a, phase); }, sch)
        .value;
}

std::vector<double> default_tau_nodes() { return {1.0, 0.5, 0.25, 0.125, 0.0625}; }

OrderOfLimitsReport order_of_limits_report(double k, const std::vector<double>& tau_list,
                                           const std::vector<double>& cutoffs,
                                           const std::optional<RegulatorSchedule>& schedule) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("order_of_limits_report: k must be positive");
    if (tau_list.size() < 2)
        throw DomainError("order_of_limits_report: need at least two tau values");
    OrderOfLimitsReport rep;
    rep.k = k;
    rep.lattice.box_side = 2.0 * pi / k;
    rep.lattice.k_index = {1, 0, 0};
    rep.lattice.cutoff = cutoffs.empty() ? 10.0 * k : cutoffs.front();
    rep.tau0_scan = divergence_scan(rep.lattice, 0.0, cutoffs);

    try {
        continuum_mode_coefficient(k, 0.0, schedule);
        rep.tau0_continuum_message = "finite";
    } catch (const ExtrapolationDiverged& e) {
        rep.tau0_continuum_diverged = true;
        rep.tau0_continuum_message = e.what();
    }

    std::vector<double> taus, values;
    for (double tau : tau_list) {
        if (tau == 0.0)
            throw DomainError("order_of_limits_report: tau list must exclude 0");
        ContinuumRow row;
        row.tau = tau;
        row.value = continuum_mode_coefficient(k, tau, schedule);
        row.reference = scalar_ft_kernel(tau, k);
        row.relative_error = std::abs(row.value - row.reference) / std::abs(row.reference);
        rep.continuum.push_back(row);
        taus.push_back(std::abs(tau));
        values.push_back(row.value);
    }
    const int order = static_cast<int>(taus.size()) - 1;
    const QuadratureResult lim = extrapolate_to_zero(taus, values, order);
    rep.tau_limit = lim.value;
    rep.tau_limit_error = lim.error_estimate;
    rep.tau_limit_reference = scalar_ft_kernel(0.0, k);
    rep.tau_limit_relative_error =
        std::abs(rep.tau_limit - rep.tau_limit_reference) / std::abs(rep.tau_limit_reference);

    try {
        continuum_mode_coefficient(k, tau_list.front(), schedule, ModePhase::difference);
    } catch (const ExtrapolationDiverged&) {
        rep.difference_phase_diverged = true;
    }
    return rep;
}

CsvTable OrderOfLimitsReport::to_csv() const {
    CsvTable t;
    t.metadata = {{"k", format_double(k)},
                  {"box_side", format_double(lattice.box_side)},
                  {"tau0_loglog_slope", format_double(tau0_scan.log_log_slope)},
                  {"tau0_continuum", tau0_continuum_diverged ? "ExtrapolationDiverged" : "finite"},
                  {"difference_phase", difference_phase_diverged ? "ExtrapolationDiverged" : "finite"}};
    t.columns = {"section", "abscissa", "value", "reference", "relative_error", "flag"};
    for (const auto& r : tau0_scan.rows)
        t.add_row({"lattice_tau0", format_double(r.cutoff), format_double(r.value), "", "",
                   "divergent"});
    for (const auto& r : continuum)
        t.add_row({"continuum", format_double(r.tau), format_double(r.value),
                   format_double(r.reference), format_double(r.relative_error), ""});
    t.add_row({"tau_to_zero", "0", format_double(tau_limit), format_double(tau_limit_reference),
               format_double(tau_limit_relative_error), ""});
    return t;
}

std::string OrderOfLimitsReport::summary() const {
    std::ostringstream os;
    os.precision(10);
    os << "order of limits at k = " << k << "\n";
    os << "  lattice, tau = 0 (box side " << lattice.box_side << "):\n";
    for (const auto& r : tau0_scan.rows)
        os << "    cutoff " << r.cutoff << "  sum " << r.value << "\n";
    os << "    log-log slope " << tau0_scan.log_log_slope << " (linear divergence)\n";
    os << "  continuum, tau = 0: "
       << (tau0_continuum_diverged ? "ExtrapolationDiverged" : "finite") << "\n";
    os << "  continuum, tau > 0 (infinite volume first):\n";
    for (const auto& r : continuum)
        os << "    tau " << r.tau << "  value " << r.value << "  -sin(k tau)/(64 pi^5 tau) "
           << r.reference << "  rel err " << r.relative_error << "\n";
    os << "  tau -> 0: " << tau_limit << "  expected " << tau_limit_reference << "  rel err "
       << tau_limit_relative_error << "\n";
    os << "  phase cos((w1 - w) tau): "
       << (difference_phase_diverged ? "ExtrapolationDiverged" : "finite") << "\n";
    return os.str();
}

} // namespace negspec
