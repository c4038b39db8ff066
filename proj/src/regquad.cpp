#include "negspec/regquad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <random>
#include <string>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"

namespace negspec {

RegulatorSchedule RegulatorSchedule::standard() {
    return RegulatorSchedule{{0.2, 0.1, 0.05, 0.025, 0.0125}, 4};
}

RegulatorSchedule RegulatorSchedule::geometric(double first, double ratio, std::size_t count,
                                               int order) {
    if (!(first > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count == 0)
        throw DomainError("RegulatorSchedule::geometric: need first > 0, 0 < ratio < 1, count > 0");
    RegulatorSchedule s;
    s.extrapolation_order = order;
    double a = first;
    for (std::size_t i = 0; i < count; ++i, a *= ratio)
        s.values.push_back(a);
    s.validate();
    return s;
}

RegulatorSchedule RegulatorSchedule::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw DomainError("RegulatorSchedule::scaled: factor must be positive");
    RegulatorSchedule s = *this;
    for (double& v : s.values)
        v *= factor;
    s.validate();
    return s;
}

void RegulatorSchedule::validate() const {
    if (extrapolation_order < 1)
        throw DomainError("RegulatorSchedule: extrapolation_order must be at least 1");
    if (values.size() < static_cast<std::size_t>(extrapolation_order) + 1)
        throw DomainError("RegulatorSchedule: need at least extrapolation_order + 1 values");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i]))
            throw DomainError("RegulatorSchedule: values must be positive and finite");
        if (i > 0 && !(values[i] < values[i - 1]))
            throw DomainError("RegulatorSchedule: values must be strictly decreasing");
    }
}

namespace {

// Neville tableau at x = 0. t[i][j] interpolates nodes i-j..i.
std::vector<std::vector<double>> neville_table(std::span<const double> x,
                                               std::span<const double> y, int max_order) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t jmax = std::min<std::size_t>(i, static_cast<std::size_t>(max_order));
        t[i].resize(jmax + 1);
        t[i][0] = y[i];
        for (std::size_t j = 1; j <= jmax; ++j)
            t[i][j] = (x[i] * t[i - 1][j - 1] - x[i - j] * t[i][j - 1]) / (x[i] - x[i - j]);
    }
    return t;
}

} // namespace

QuadratureResult extrapolate_to_zero(std::span<const double> nodes, std::span<const double> values,
                                     int order) {
    if (nodes.size() != values.size())
        throw DomainError("extrapolate_to_zero: size mismatch");
    if (order < 1 || nodes.size() < static_cast<std::size_t>(order) + 1)
        throw DomainError("extrapolate_to_zero: need at least order + 1 nodes");
    const auto t = neville_table(nodes, values, order);
    const auto& last = t.back();
    QuadratureResult res;
    res.value = last[static_cast<std::size_t>(order)];
    res.error_estimate = std::abs(last[static_cast<std::size_t>(order)] -
                                  last[static_cast<std::size_t>(order) - 1]);
    res.evaluations = static_cast<std::int64_t>(nodes.size());
    return res;
}

QuadratureResult abel_limit(const RealFunction& f, const RegulatorSchedule& schedule) {
    schedule.validate();
    std::vector<double> values;
    values.reserve(schedule.values.size());
    for (double a : schedule.values) {
        const double v = f(a);
        if (!std::isfinite(v))
            throw NonConvergence("abel_limit: non-finite value at regulator " + std::to_string(a));
        values.push_back(v);
    }

    const int order = schedule.extrapolation_order;
    const auto t = neville_table(schedule.values, values, order);
    std::vector<double> diag;
    for (const auto& row : t)
        diag.push_back(row.back());

    // A divergent family shows steadily growing extrapolants with growing increments.
    bool growing = diag.size() >= 3;
    for (std::size_t i = 1; growing && i < diag.size(); ++i)
        growing = std::abs(diag[i]) > std::abs(diag[i - 1]);
    if (growing) {
        const double first_step = std::abs(diag[1] - diag[0]);
        const double last_step = std::abs(diag.back() - diag[diag.size() - 2]);
        if (std::abs(diag.back()) > 10.0 * std::abs(diag.front()) && last_step >= first_step)
            throw ExtrapolationDiverged("abel_limit: extrapolants grow from " +
                                        std::to_string(diag.front()) + " to " +
                                        std::to_string(diag.back()));
    }

    QuadratureResult res = extrapolate_to_zero(schedule.values, values, order);
    res.evaluations = static_cast<std::int64_t>(values.size());
    return res;
}

namespace {

constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealFunction& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * wgk[7];
    double gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[static_cast<std::size_t>(j)];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        kron += wgk[static_cast<std::size_t>(j)] * (f1 + f2);
        if (j % 2 == 1)
            gauss += wg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

} // namespace

QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const IntegrationOptions& opts) {
    QuadratureResult res;
    if (a == b)
        return {0.0, 0.0, 1};
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::priority_queue<Segment> heap;
    Segment s0 = gk15(f, a, b);
    res.evaluations = 15;
    double total = s0.value;
    double err = s0.error;
    heap.push(s0);
    int subdivisions = 0;
    while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
           subdivisions < opts.max_subdivisions) {
        Segment s = heap.top();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b))
            break;
        heap.pop();
        Segment l = gk15(f, s.a, mid);
        Segment r = gk15(f, mid, s.b);
        res.evaluations += 30;
        ++subdivisions;
        heap.push(l);
        heap.push(r);
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        if (subdivisions % 64 == 0 || err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
            // recompute from scratch so the running totals cannot drift
            NeumaierSum tv, te;
            auto copy = heap;
            while (!copy.empty()) {
                tv.add(copy.top().value);
                te.add(copy.top().error);
                copy.pop();
            }
            total = tv.value();
            err = te.value();
        }
    }
    res.value = sign * total;
    res.error_estimate = err;
    return res;
}

QuadratureResult integrate_semi_infinite(const RealFunction& f, double a,
                                         const IntegrationOptions& opts) {
    auto g = [&](double t) {
        if (t >= 1.0)
            return 0.0;
        const double d = 1.0 - t;
        return f(a + t / d) / (d * d);
    };
    return integrate(g, 0.0, 1.0, opts);
}

QuadratureResult wynn_epsilon(std::span<const double> s) {
    const std::size_t n = s.size();
    QuadratureResult best{n ? s.back() : 0.0, std::numeric_limits<double>::infinity(),
                          static_cast<std::int64_t>(n)};
    if (n == 0)
        return best;
    if (n >= 2)
        best.error_estimate = std::abs(s[n - 1] - s[n - 2]);
    if (n < 3)
        return best;

    const double tiny = std::numeric_limits<double>::min() * 1e4;
    std::vector<double> prev(n, 0.0);
    std::vector<double> cur(s.begin(), s.end());
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> next(n - k);
        bool broken = false;
        for (std::size_t i = 0; i + k < n; ++i) {
            const double d = cur[i + 1] - cur[i];
            if (std::abs(d) <= tiny + 4.0 * std::numeric_limits<double>::epsilon() *
                                          std::max(std::abs(cur[i + 1]), std::abs(cur[i]))) {
                broken = true;
                break;
            }
            next[i] = prev[i + 1] + 1.0 / d;
        }
        if (broken) {
            // the current column has converged to working precision
            if (k % 2 == 1 && cur.size() >= 2) {
                const double v = cur.back();
                const double e = std::abs(cur.back() - cur[cur.size() - 2]);
                if (e <= best.error_estimate)
                    best = {v, e, best.evaluations};
            }
            break;
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0 && cur.size() >= 2) {
            const double v = cur.back();
            const double e = std::abs(cur.back() - cur[cur.size() - 2]);
            if (e <= best.error_estimate)
                best = {v, e, best.evaluations};
        }
    }
    best.error_estimate += 8.0 * std::numeric_limits<double>::epsilon() * std::abs(best.value);
    return best;
}

QuadratureResult euler_average(std::span<const double> s, int depth) {
    std::vector<double> cur(s.begin(), s.end());
    QuadratureResult res{cur.empty() ? 0.0 : cur.back(), 0.0, static_cast<std::int64_t>(s.size())};
    for (int d = 0; d < depth && cur.size() > 2; ++d) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i)
            next[i] = 0.5 * (cur[i] + cur[i + 1]);
        cur = std::move(next);
    }
    if (!cur.empty())
        res.value = cur.back();
    if (cur.size() >= 2)
        res.error_estimate = std::abs(cur.back() - cur[cur.size() - 2]);
    return res;
}

QuadratureResult oscillatory_integral(const OscillatoryIntegrand& g, double alpha,
                                      const OscillatoryOptions& opts) {
    if (!g.amplitude)
        throw DomainError("oscillatory_integral: missing amplitude");
    const double w = g.phase_frequency;
    if (!(w > 0.0) || !std::isfinite(w))
        throw DomainError("oscillatory_integral: phase_frequency must be positive");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw DomainError("oscillatory_integral: alpha must be non-negative");

    const double start = g.domain_start;
    auto h = [&](double u) {
        double v = g.amplitude(u);
        switch (g.weight) {
        case OscillatoryWeight::sine: v *= std::sin(w * u); break;
        case OscillatoryWeight::cosine: v *= std::cos(w * u); break;
        case OscillatoryWeight::none: break;
        }
        if (alpha > 0.0)
            v *= std::exp(-alpha * u);
        return v;
    };

    const double spacing = pi / w;
    const double offset = g.weight == OscillatoryWeight::cosine ? 0.5 : 0.0;
    double index = std::floor(start / spacing - offset) + 1.0;
    double next_zero = (index + offset) * spacing;
    if (next_zero - start < 1e-9 * spacing) {
        index += 1.0;
        next_zero = (index + offset) * spacing;
    }

    IntegrationOptions panel_opts;
    panel_opts.abs_tol = 0.0;
    panel_opts.rel_tol = 1e-13;
    panel_opts.max_subdivisions = 200;

    QuadratureResult res;
    std::vector<double> partial;
    NeumaierSum running;
    double panel_error = 0.0;
    double a = start;
    double last_est = 0.0;
    int settled = 0;
    const std::size_t window = 100;
    const std::size_t patience = 30;
    QuadratureResult best{0.0, std::numeric_limits<double>::infinity(), 0};
    std::size_t since_best = 0;

    for (std::size_t p = 0; p < opts.max_panels; ++p) {
        const double b = next_zero;
        const QuadratureResult panel = integrate(h, a, b, panel_opts);
        res.evaluations += panel.evaluations;
        panel_error += panel.error_estimate;
        running.add(panel.value);
        partial.push_back(running.value());
        a = b;
        index += 1.0;
        next_zero = (index + offset) * spacing;

        if (partial.size() < opts.min_panels)
            continue;

        const std::size_t first = partial.size() > window ? partial.size() - window : 0;
        std::span<const double> tail(partial.data() + first, partial.size() - first);
        const QuadratureResult acc = opts.accelerator == SeriesAccelerator::epsilon
                                         ? wynn_epsilon(tail)
                                         : euler_average(tail, opts.euler_depth);
        const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(acc.value));
        const double change = std::abs(acc.value - last_est);
        const double err = std::max(change, acc.error_estimate);
        last_est = acc.value;
        settled = err <= tol ? settled + 1 : 0;
        if (settled >= 3) {
            res.value = acc.value;
            res.error_estimate = err + panel_error;
            return res;
        }
        // once rounding in the growing partial sums dominates, keep the best estimate seen
        if (err < best.error_estimate) {
            best.value = acc.value;
            best.error_estimate = err;
            since_best = 0;
        } else if (++since_best >= patience) {
            res.value = best.value;
            res.error_estimate = best.error_estimate + panel_error;
            return res;
        }
    }
    throw NonConvergence("oscillatory_integral: no convergence after " +
                         std::to_string(opts.max_panels) + " panels");
}

namespace {

struct BatchStats {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
};

BatchStats combine(const BatchStats& x, const BatchStats& y) {
    if (x.count == 0.0)
        return y;
    if (y.count == 0.0)
        return x;
    BatchStats z;
    z.count = x.count + y.count;
    const double delta = y.mean - x.mean;
    z.mean = x.mean + delta * y.count / z.count;
    z.m2 = x.m2 + y.m2 + delta * delta * x.count * y.count / z.count;
    return z;
}

BatchStats reduce_pairwise(std::span<const BatchStats> b) {
    if (b.size() == 1)
        return b[0];
    const std::size_t half = b.size() / 2;
    return combine(reduce_pairwise(b.first(half)), reduce_pairwise(b.subspan(half)));
}

} // namespace

QuadratureResult mc_integrate(const BoxFunction& f, std::span<const Interval> bounds,
                              std::int64_t samples, std::uint64_t seed) {
    if (samples < 10000)
        throw DomainError("mc_integrate: at least 10^4 samples required");
    if (bounds.empty())
        throw DomainError("mc_integrate: empty box");
    double volume = 1.0;
    for (const Interval& iv : bounds) {
        if (!(iv.hi > iv.lo))
            throw DomainError("mc_integrate: each interval needs hi > lo");
        volume *= iv.hi - iv.lo;
    }

    constexpr std::int64_t batch = 4096;
    std::mt19937_64 rng(seed);
    std::vector<double> x(bounds.size());
    std::vector<BatchStats> stats;
    stats.reserve(static_cast<std::size_t>(samples / batch + 1));
    for (std::int64_t done = 0; done < samples; done += batch) {
        const std::int64_t m = std::min(batch, samples - done);
        BatchStats s;
        for (std::int64_t i = 0; i < m; ++i) {
            for (std::size_t d = 0; d < bounds.size(); ++d) {
                const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
                x[d] = bounds[d].lo + u * (bounds[d].hi - bounds[d].lo);
            }
            const double v = f(x);
            s.count += 1.0;
            const double delta = v - s.mean;
            s.mean += delta / s.count;
            s.m2 += delta * (v - s.mean);
        }
        stats.push_back(s);
    }
    const BatchStats total = reduce_pairwise(stats);
    QuadratureResult res;
    res.value = volume * total.mean;
    const double var = total.count > 1.0 ? total.m2 / (total.count - 1.0) : 0.0;
    res.error_estimate = volume * std::sqrt(var / total.count);
    res.evaluations = samples;
    return res;
}

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1)
        throw DomainError("gauss_legendre: n must be positive");
    static std::mutex mutex;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;

    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        if (n == 1) {
            x = 0.0;
            dp = 1.0;
        }
        const double wgt = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = wgt;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = wgt;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v)
            s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

} // namespace negspec
