#include "negspec/smeared.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <future>
#include <limits>
#include <tuple>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"
#include "negspec/kernels.hpp"
#include "negspec/profiles.hpp"

namespace negspec {

const char* test_function_kind_name(TestFunctionKind k) {
    return k == TestFunctionKind::gaussian ? "gaussian" : "compact_bump";
}

TestFunctionKind parse_test_function_kind(const std::string& name) {
    if (name == "gaussian")
        return TestFunctionKind::gaussian;
    if (name == "compact_bump" || name == "bump")
        return TestFunctionKind::compact_bump;
    throw DomainError("unknown test function kind '" + name + "'");
}

const char* smearing_method_name(SmearingMethod m) {
    return m == SmearingMethod::reduced ? "reduced" : "monte_carlo";
}

SmearingMethod parse_smearing_method(const std::string& name) {
    if (name == "reduced")
        return SmearingMethod::reduced;
    if (name == "monte_carlo" || name == "mc")
        return SmearingMethod::monte_carlo;
    throw DomainError("unknown smearing method '" + name + "'");
}

void TestFunctionSpec::validate() const {
    if (!(temporal_width > 0.0) || !(spatial_width > 0.0) || !std::isfinite(temporal_width) ||
        !std::isfinite(spatial_width))
        throw DomainError("TestFunctionSpec: widths must be positive and finite");
    if (!std::isfinite(amplitude))
        throw DomainError("TestFunctionSpec: amplitude must be finite");
    for (double c : center)
        if (!std::isfinite(c))
            throw DomainError("TestFunctionSpec: center must be finite");
}

double TestFunctionSpec::temporal_support() const {
    return kind == TestFunctionKind::compact_bump ? 4.0 * temporal_width
                                                  : std::numeric_limits<double>::infinity();
}

double TestFunctionSpec::spatial_support() const {
    return kind == TestFunctionKind::compact_bump ? 4.0 * spatial_width
                                                  : std::numeric_limits<double>::infinity();
}

void SmearingConfig::validate() const {
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw DomainError("SmearingConfig: ell must be positive");
    if (epsilon && (!(*epsilon >= 0.0) || !std::isfinite(*epsilon)))
        throw DomainError("SmearingConfig: epsilon must be non-negative");
    if (mc_samples < 10000)
        throw DomainError("SmearingConfig: mc_samples must be at least 10^4");
    if (quadrature_order < 4 || quadrature_order > 64)
        throw DomainError("SmearingConfig: quadrature_order must lie in [4, 64]");
}

double SmearingConfig::effective_epsilon(const TestFunctionSpec& a,
                                         const TestFunctionSpec& b) const {
    if (epsilon)
        return *epsilon;
    return 1e-6 * std::min({a.temporal_width, a.spatial_width, b.temporal_width,
                            b.spatial_width});
}

namespace {

double spatial_distance(const Point4& a, const Point4& b) {
    const double dx = a[1] - b[1], dy = a[2] - b[2], dz = a[3] - b[3];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct Profiles {
    TimeProfile f;
    RadialProfile g;
};

// Gaussians are cut at 12 widths, far below double precision.
constexpr double gaussian_cut = 12.0;

Profiles base_profiles(const TestFunctionSpec& s, bool truncate_gaussian) {
    Profiles p;
    if (s.kind == TestFunctionKind::gaussian) {
        const double st = s.temporal_width, sx = s.spatial_width;
        p.f = TimeProfile{Polynomial{{1.0}}, 0.5 / (st * st),
                          truncate_gaussian ? gaussian_cut * st
                                            : std::numeric_limits<double>::infinity()};
        p.g = RadialProfile{Polynomial{{1.0}}, 0.5 / (sx * sx),
                            truncate_gaussian ? gaussian_cut * sx
                                              : std::numeric_limits<double>::infinity()};
    } else {
        const double W = s.temporal_support(), R = s.spatial_support();
        Polynomial base{{1.0, 0.0, -1.0 / (W * W)}};
        Polynomial f{{1.0}};
        for (int i = 0; i < 6; ++i)
            f = f * base;
        p.f = TimeProfile{f, 0.0, W};
        p.g = RadialProfile{Polynomial::binomial_power(1.0, -1.0 / (R * R), 6), 0.0, R};
    }
    return p;
}

struct Term {
    TimeProfile a;
    RadialProfile b;
    double sign = 1.0;
};

struct Decomposed {
    std::vector<Term> terms;
    double W = 0.0; // temporal half-width of the (effective) support
    double R = 0.0; // spatial radius of the (effective) support
    double h_t = 0.0; // longest quadrature piece in time
    double h_x = 0.0; // and in space
};

Decomposed decompose(const TestFunctionSpec& s, bool by_parts) {
    const Profiles p = base_profiles(s, true);
    Decomposed d;
    if (by_parts) {
        d.terms.push_back({p.f.second_derivative(), p.g.laplacian(), 1.0});
        d.terms.push_back({p.f, p.g.laplacian().laplacian(), -1.0});
    } else {
        d.terms.push_back({p.f, p.g, 1.0});
    }
    d.W = p.f.support;
    d.R = p.g.support;
    d.h_t = s.temporal_width;
    d.h_x = s.spatial_width;
    return d;
}

void gl_piece(double a, double b, int n, std::vector<double>& x, std::vector<double>& w) {
    if (!(b > a))
        return;
    const GaussLegendreRule& rule = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        x.push_back(c + h * rule.nodes[i]);
        w.push_back(h * rule.weights[i]);
    }
}

struct Breakpoint {
    double x;
    bool singular;
};

// Gauss-Legendre nodes on [lo, hi] split at breakpoints, pieces no longer than hmax,
// geometrically graded towards singular breakpoints.
void composite_rule(double lo, double hi, std::vector<Breakpoint> bps, double hmax, int n,
                    std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    if (!(hi > lo))
        return;
    bps.push_back({lo, false});
    bps.push_back({hi, false});
    std::sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) {
        return a.x < b.x || (a.x == b.x && a.singular > b.singular);
    });
    std::vector<Breakpoint> pts;
    for (const Breakpoint& b : bps) {
        if (b.x < lo || b.x > hi)
            continue;
        if (!pts.empty() && std::abs(b.x - pts.back().x) <= 1e-14 * std::max(1.0, std::abs(b.x))) {
            pts.back().singular = pts.back().singular || b.singular;
            continue;
        }
        pts.push_back(b);
    }
    constexpr int grading_levels = 14;
    constexpr double grading_ratio = 0.2;
    auto uniform = [&](double a, double b) {
        const int m = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
        for (int i = 0; i < m; ++i)
            gl_piece(a + (b - a) * i / m, a + (b - a) * (i + 1) / m, n, x, w);
    };
    auto graded = [&](double s, double e) {
        // singular at s, towards e (either direction)
        const double len = e - s;
        double outer = 1.0;
        for (int k = 1; k <= grading_levels; ++k) {
            const double inner = outer * grading_ratio;
            const double a = s + len * inner, b = s + len * outer;
            gl_piece(std::min(a, b), std::max(a, b), n, x, w);
            outer = inner;
        }
        gl_piece(std::min(s, s + len * outer), std::max(s, s + len * outer), n, x, w);
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = pts[i].x, b = pts[i + 1].x;
        const bool sa = pts[i].singular, sb = pts[i + 1].singular;
        if (!sa && !sb) {
            uniform(a, b);
            continue;
        }
        double span = std::min(b - a, hmax);
        if (sa && sb)
            span = std::min(span, 0.5 * (b - a));
        if (sa) {
            graded(a, a + span);
            a += span;
        }
        if (sb) {
            graded(b, b - span);
            b -= span;
        }
        if (b > a)
            uniform(a, b);
    }
}

// Piecewise Chebyshev interpolant of a smooth function between breakpoints.
class ChebyshevTable {
public:
    ChebyshevTable() = default;

    template <class F>
    ChebyshevTable(double lo, double hi, std::vector<double> breaks, double hmax, int degree, F&& f)
        : lo_(lo), hi_(hi), nodes_(degree + 1), weights_(degree + 1) {
        for (int j = 0; j <= degree; ++j) {
            nodes_[static_cast<std::size_t>(j)] = std::cos(pi * j / degree);
            weights_[static_cast<std::size_t>(j)] =
                ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == degree) ? 0.5 : 1.0);
        }
        breaks.push_back(lo);
        breaks.push_back(hi);
        std::sort(breaks.begin(), breaks.end());
        std::vector<double> edges;
        for (double b : breaks)
            if (b >= lo && b <= hi && (edges.empty() || b - edges.back() > 1e-13 * (hi - lo)))
                edges.push_back(b);
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            const double a = edges[i], b = edges[i + 1];
            const int m = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
            for (int j = 0; j < m; ++j) {
                Piece p{a + (b - a) * j / m, a + (b - a) * (j + 1) / m, {}};
                for (double t : nodes_)
                    p.v.push_back(f(0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * t));
                starts_.push_back(p.a);
                pieces_.push_back(std::move(p));
            }
        }
    }

    double operator()(double x) const {
        if (!(x >= lo_ && x <= hi_) || pieces_.empty())
            return 0.0;
        auto it = std::upper_bound(starts_.begin(), starts_.end(), x);
        const std::size_t k = it == starts_.begin() ? 0 : static_cast<std::size_t>(it - starts_.begin()) - 1;
        const Piece& p = pieces_[k];
        const double t = (2.0 * x - p.a - p.b) / (p.b - p.a);
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            const double d = t - nodes_[j];
            if (d == 0.0)
                return p.v[j];
            const double w = weights_[j] / d;
            num += w * p.v[j];
            den += w;
        }
        return num / den;
    }

    // table of int_lo^x g(u) f(u) du on the same pieces
    template <class G>
    ChebyshevTable antiderivative(G&& g, int n) const {
        ChebyshevTable out = *this;
        const GaussLegendreRule& rule = gauss_legendre(n);
        double base = 0.0;
        for (std::size_t k = 0; k < pieces_.size(); ++k) {
            const Piece& p = pieces_[k];
            auto segment = [&](double b) {
                const double c = 0.5 * (p.a + b), h = 0.5 * (b - p.a);
                double acc = 0.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    const double u = c + h * rule.nodes[i];
                    acc += rule.weights[i] * g(u) * (*this)(u);
                }
                return acc * h;
            };
            for (std::size_t j = 0; j < nodes_.size(); ++j) {
                const double x = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * nodes_[j];
                out.pieces_[k].v[j] = base + segment(x);
            }
            base += segment(p.b);
        }
        return out;
    }

    double upper() const { return hi_; }

private:
    struct Piece {
        double a, b;
        std::vector<double> v;
    };

    double lo_ = 0.0, hi_ = 0.0;
    std::vector<double> nodes_, weights_;
    std::vector<Piece> pieces_;
    std::vector<double> starts_;
};

class PairIntegrator {
public:
    using Kernel = std::function<double(double tau, double r)>;

    PairIntegrator(const TestFunctionSpec& s1, const TestFunctionSpec& s2, bool by_parts,
                   Kernel kernel, bool singular)
        : d1_(decompose(s1, by_parts)), d2_(decompose(s2, by_parts)), kernel_(std::move(kernel)),
          singular_(singular) {
        dt_ = s1.center[0] - s2.center[0];
        D_ = spatial_distance(s1.center, s2.center);
    }

    QuadratureResult integrate(int n) const {
        QuadratureResult coarse = run(n);
        QuadratureResult fine = run(n + 8);
        fine.error_estimate = std::max(std::abs(fine.value - coarse.value), fine.error_estimate);
        fine.evaluations += coarse.evaluations;
        return fine;
    }

private:
    // T_ij(s) = int a1_i(u) a2_j(u - s) du
    double time_overlap(const Term& t1, const Term& t2, double s, int n) const {
        const double lo = std::max(-d1_.W, s - d2_.W);
        const double hi = std::min(d1_.W, s + d2_.W);
        if (!(hi > lo))
            return 0.0;
        const double hmax = std::min(d1_.h_t, d2_.h_t) * 2.0;
        const int m = std::max(1, static_cast<int>(std::ceil((hi - lo) / hmax)));
        const GaussLegendreRule& rule = gauss_legendre(n);
        NeumaierSum acc;
        for (int p = 0; p < m; ++p) {
            const double a = lo + (hi - lo) * p / m, b = lo + (hi - lo) * (p + 1) / m;
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            double part = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double u = c + h * rule.nodes[i];
                part += rule.weights[i] * t1.a(u) * t2.a(u - s);
            }
            acc.add(part * h);
        }
        return acc.value();
    }

    // H_ij(rho) = int d^3x b1(|x|) b2(|x - y|), |y| = rho
    double radial_convolution(const Term& t1, const Term& t2, double rho, int n) const {
        const double R1 = d1_.R, R2 = d2_.R;
        std::vector<Breakpoint> bps{{R2 - rho, false}, {rho - R2, false}, {rho + R2, false}};
        std::vector<double> x, w;
        composite_rule(0.0, R1, bps, std::min(d1_.h_x, d2_.h_x), n, x, w);
        NeumaierSum acc;
        if (rho <= 1e-12 * std::max(R1, 1.0)) {
            for (std::size_t i = 0; i < x.size(); ++i)
                acc.add(w[i] * x[i] * x[i] * t1.b(x[i]) * t2.b(x[i]));
            return 4.0 * pi * acc.value();
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double u = x[i];
            acc.add(w[i] * u * t1.b(u) * (t2.b.moment(rho + u) - t2.b.moment(std::abs(rho - u))));
        }
        return 2.0 * pi / rho * acc.value();
    }

    // average of H_ij(|y - Delta|) over the sphere |y| = r, from H and Q(x) = int_0^x u H(u) du
    double shell_average(const ChebyshevTable& H, const ChebyshevTable& Q, double r) const {
        const double top = H.upper();
        if (D_ == 0.0)
            return r > top ? 0.0 : H(r);
        if (r == 0.0)
            return D_ > top ? 0.0 : H(D_);
        const double lo = std::abs(r - D_), hi = r + D_;
        if (lo >= top)
            return 0.0;
        return (Q(std::min(hi, top)) - Q(lo)) / (2.0 * r * D_);
    }

public:
    QuadratureResult run(int n) const {
        const int n_inner = 2 * n + 8;
        const double R1 = d1_.R, R2 = d2_.R, W1 = d1_.W, W2 = d2_.W;
        const double r_lo = std::max(0.0, D_ - R1 - R2);
        const double r_hi = D_ + R1 + R2;
        const double tau_lo = dt_ - W1 - W2, tau_hi = dt_ + W1 + W2;
        const std::vector<double> s_breaks{W1 - W2, W2 - W1, W1 + W2, -W1 - W2};

        std::vector<Breakpoint> r_bps;
        for (double rb : {0.0, R1, R2, std::abs(R1 - R2), R1 + R2}) {
            r_bps.push_back({D_ + rb, false});
            r_bps.push_back({D_ - rb, false});
            r_bps.push_back({rb - D_, false});
        }
        for (double sb : s_breaks)
            r_bps.push_back({std::abs(dt_ + sb), false});
        r_bps.push_back({std::abs(dt_), false});

        std::vector<double> rx, rw;
        composite_rule(r_lo, r_hi, r_bps, std::min(d1_.h_x, d2_.h_x), n, rx, rw);

        const std::size_t nt1 = d1_.terms.size(), nt2 = d2_.terms.size();
        const int degree = n_inner;
        const double r_top = R1 + R2;
        std::vector<ChebyshevTable> overlap, conv, conv_q;
        for (std::size_t i = 0; i < nt1; ++i)
            for (std::size_t j = 0; j < nt2; ++j) {
                const Term& t1 = d1_.terms[i];
                const Term& t2 = d2_.terms[j];
                overlap.emplace_back(-W1 - W2, W1 + W2, s_breaks, std::min(d1_.h_t, d2_.h_t), degree,
                                     [&](double s) { return time_overlap(t1, t2, s, n_inner); });
                conv.emplace_back(0.0, r_top, std::vector<double>{std::abs(R1 - R2)},
                                  std::min(d1_.h_x, d2_.h_x), degree,
                                  [&](double rho) { return radial_convolution(t1, t2, rho, n_inner); });
                conv_q.push_back(conv.back().antiderivative([](double u) { return u; }, n_inner));
            }
        std::vector<double> pbar(nt1 * nt2);
        std::vector<double> tx, tw, kv;
        QuadratureResult res;
        NeumaierSum total;
        double total_abs = 0.0;
        const double h_t = std::min(d1_.h_t, d2_.h_t);
        for (std::size_t ir = 0; ir < rx.size(); ++ir) {
            const double r = rx[ir];
            bool any = false;
            for (std::size_t i = 0; i < nt1; ++i)
                for (std::size_t j = 0; j < nt2; ++j) {
                    const double v = shell_average(conv[i * nt2 + j], conv_q[i * nt2 + j], r);
                    pbar[i * nt2 + j] = v;
                    any = any || v != 0.0;
                }
            if (!any)
                continue;

            std::vector<Breakpoint> t_bps;
            for (double sb : s_breaks)
                t_bps.push_back({dt_ + sb, false});
            if (singular_) {
                t_bps.push_back({r, true});
                t_bps.push_back({-r, true});
            }
            composite_rule(tau_lo, tau_hi, t_bps, h_t, n, tx, tw);
            kv.resize(tx.size());
            for (std::size_t it = 0; it < tx.size(); ++it)
                kv[it] = kernel_(tx[it], r);
            res.evaluations += static_cast<std::int64_t>(tx.size());

            NeumaierSum at_r;
            double at_r_abs = 0.0;
            for (std::size_t i = 0; i < nt1; ++i)
                for (std::size_t j = 0; j < nt2; ++j) {
                    const double pb = pbar[i * nt2 + j];
                    if (pb == 0.0)
                        continue;
                    NeumaierSum inner;
                    double inner_abs = 0.0;
                    const ChebyshevTable& T = overlap[i * nt2 + j];
                    for (std::size_t it = 0; it < tx.size(); ++it) {
                        const double v = tw[it] * kv[it] * T(tx[it] - dt_);
                        inner.add(v);
                        inner_abs += std::abs(v);
                    }
                    at_r.add(d1_.terms[i].sign * d2_.terms[j].sign * pb * inner.value());
                    at_r_abs += std::abs(pb) * inner_abs;
                }
            total.add(rw[ir] * 4.0 * pi * r * r * at_r.value());
            total_abs += rw[ir] * 4.0 * pi * r * r * at_r_abs;
        }
        res.value = total.value();
        // rounding floor from cancellation between the image terms
        res.error_estimate = 50.0 * std::numeric_limits<double>::epsilon() * total_abs;
        res.evaluations = std::max<std::int64_t>(res.evaluations, 1);
        return res;
    }

private:
    Decomposed d1_, d2_;
    Kernel kernel_;
    bool singular_;
    double dt_ = 0.0;
    double D_ = 0.0;
};

auto spec_key(const TestFunctionSpec& s) {
    return std::make_tuple(static_cast<int>(s.kind), s.center[0], s.center[1], s.center[2],
                           s.center[3], s.temporal_width, s.spatial_width, s.amplitude);
}

// Maps four uniforms to a point and an importance weight for the given density.
struct Sampler {
    TestFunctionSpec spec;
    Profiles prof;
    RadialProfile g2, g4;
    TimeProfile f2;

    explicit Sampler(const TestFunctionSpec& s) : spec(s), prof(base_profiles(s, false)) {
        f2 = prof.f.second_derivative();
        g2 = prof.g.laplacian();
        g4 = g2.laplacian();
    }

    // writes the point, returns the weight
    double draw(const double* u, Point4& x, bool by_parts) const {
        const double st = spec.temporal_width, sx = spec.spatial_width;
        if (spec.kind == TestFunctionKind::gaussian) {
            double z[4];
            for (int i = 0; i < 2; ++i) {
                const double rad = std::sqrt(-2.0 * std::log(u[2 * i]));
                const double ang = 2.0 * pi * u[2 * i + 1];
                z[2 * i] = rad * std::cos(ang);
                z[2 * i + 1] = rad * std::sin(ang);
            }
            x = {spec.center[0] + st * z[0], spec.center[1] + sx * z[1],
                 spec.center[2] + sx * z[2], spec.center[3] + sx * z[3]};
            const double t = st * z[0];
            const double rho = sx * std::sqrt(z[1] * z[1] + z[2] * z[2] + z[3] * z[3]);
            const double norm = 4.0 * pi2 * st * sx * sx * sx;
            const double poly = by_parts ? f2.envelope(t) * g2.envelope(rho) -
                                               prof.f.envelope(t) * g4.envelope(rho)
                                         : 1.0;
            return spec.amplitude * norm * poly;
        }
        const double W = spec.temporal_support(), R = spec.spatial_support();
        x = {spec.center[0] + W * (2.0 * u[0] - 1.0), spec.center[1] + R * (2.0 * u[1] - 1.0),
             spec.center[2] + R * (2.0 * u[2] - 1.0), spec.center[3] + R * (2.0 * u[3] - 1.0)};
        const double t = x[0] - spec.center[0];
        const double rho = spatial_distance(x, spec.center);
        const double volume = 2.0 * W * 8.0 * R * R * R;
        const double v = by_parts ? f2(t) * g2(rho) - prof.f(t) * g4(rho) : prof.f(t) * prof.g(rho);
        return spec.amplitude * volume * v;
    }
};

} // namespace

double log_kernel_separation(double tau, double r, double epsilon, double ell) {
    const double re = r * r - tau * tau + epsilon * epsilon;
    const double im = 2.0 * tau * epsilon;
    if (re == 0.0 && im == 0.0) {
        if (r == 0.0 && tau == 0.0)
            throw CoincidentPoints("log_kernel: coincident points with epsilon = 0");
        throw LightConeSingularity("log_kernel: null separation with epsilon = 0");
    }
    const double a = std::log(std::hypot(re, im)) - 2.0 * std::log(ell);
    const double b = std::atan2(im, re);
    return a * a - b * b;
}

double log_kernel(const Point4& x, const Point4& xp, const SmearingConfig& cfg) {
    const double eps = cfg.epsilon.value_or(0.0);
    const double tau = x[0] - xp[0];
    const double r = spatial_distance(x, xp);
    if (tau == 0.0 && r == 0.0 && eps == 0.0)
        throw CoincidentPoints("log_kernel: coincident points with epsilon = 0");
    return log_kernel_separation(tau, r, eps, cfg.ell);
}

std::function<double(const Point4&)> smeared_operator_image_exact(const TestFunctionSpec& s) {
    s.validate();
    const Profiles p = base_profiles(s, false);
    const TimeProfile f2 = p.f.second_derivative();
    const RadialProfile g2 = p.g.laplacian();
    const RadialProfile g4 = g2.laplacian();
    return [s, p, f2, g2, g4](const Point4& x) {
        const double t = x[0] - s.center[0];
        const double rho = spatial_distance(x, s.center);
        return s.amplitude * (f2(t) * g2(rho) - p.f(t) * g4(rho));
    };
}

std::function<double(const Point4&)> smeared_operator_image(const TestFunctionSpec& s) {
    s.validate();
    if (s.kind == TestFunctionKind::gaussian)
        return smeared_operator_image_exact(s);
    // fourth order centred differences, step width / 100 per axis
    const std::array<double, 4> h{s.temporal_width / 100.0, s.spatial_width / 100.0,
                                  s.spatial_width / 100.0, s.spatial_width / 100.0};
    return [s, h](const Point4& x) {
        static constexpr double c[5] = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0,
                                        -1.0 / 12.0};
        auto mixed = [&](int a, int b) {
            double acc = 0.0;
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j) {
                    Point4 y = x;
                    y[static_cast<std::size_t>(a)] += (i - 2) * h[static_cast<std::size_t>(a)];
                    y[static_cast<std::size_t>(b)] += (j - 2) * h[static_cast<std::size_t>(b)];
                    acc += c[i] * c[j] * s(y);
                }
            return acc / (h[static_cast<std::size_t>(a)] * h[static_cast<std::size_t>(a)] *
                          h[static_cast<std::size_t>(b)] * h[static_cast<std::size_t>(b)]);
        };
        double v = 0.0;
        for (int i = 1; i <= 3; ++i)
            v += mixed(0, i);
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j)
                v -= mixed(i, j);
        return v;
    };
}

double TestFunctionSpec::operator()(const Point4& x) const {
    const Profiles p = base_profiles(*this, false);
    return amplitude * p.f(x[0] - center[0]) * p.g(spatial_distance(x, center));
}

bool supports_spacelike_separated(const TestFunctionSpec& s1, const TestFunctionSpec& s2) {
    if (s1.kind != TestFunctionKind::compact_bump || s2.kind != TestFunctionKind::compact_bump)
        return false;
    const double D = spatial_distance(s1.center, s2.center);
    const double dt = std::abs(s1.center[0] - s2.center[0]);
    return D - s1.spatial_support() - s2.spatial_support() >
           dt + s1.temporal_support() + s2.temporal_support();
}

QuadratureResult smeared_K(const TestFunctionSpec& s1_in, const TestFunctionSpec& s2_in,
                           const SmearingConfig& cfg) {
    s1_in.validate();
    s2_in.validate();
    cfg.validate();
    const bool swap = spec_key(s2_in) < spec_key(s1_in);
    const TestFunctionSpec& s1 = swap ? s2_in : s1_in;
    const TestFunctionSpec& s2 = swap ? s1_in : s2_in;
    const double eps = cfg.effective_epsilon(s1, s2);
    const double ell = cfg.ell;

    QuadratureResult res;
    if (cfg.method == SmearingMethod::reduced) {
        TestFunctionSpec u1 = s1, u2 = s2;
        u1.amplitude = 1.0;
        u2.amplitude = 1.0;
        auto integrator = [&](double e) {
            return PairIntegrator(u1, u2, true,
                                  [e, ell](double tau, double r) {
                                      return log_kernel_separation(tau, r, e, ell);
                                  },
                                  true);
        };
        const int n = cfg.quadrature_order;
        if (cfg.epsilon) {
            res = integrator(eps).integrate(n);
        } else if (supports_spacelike_separated(s1, s2)) {
            res = integrator(0.0).integrate(n);
        } else {
            // the regulator bias is linear in eps; remove it with eps, eps/2, eps/4
            const std::array<double, 3> nodes{eps, 0.5 * eps, 0.25 * eps};
            std::array<double, 3> values{};
            std::int64_t evals = 0;
            for (std::size_t i = 0; i < 2; ++i) {
                const QuadratureResult q = integrator(nodes[i]).run(n);
                values[i] = q.value;
                evals += q.evaluations;
            }
            const QuadratureResult last = integrator(nodes[2]).integrate(n);
            values[2] = last.value;
            res = extrapolate_to_zero(nodes, values, 2);
            res.error_estimate += last.error_estimate;
            res.evaluations = evals + last.evaluations;
        }
    } else {
        const Sampler a(s1), b(s2);
        std::vector<Interval> box(8, Interval{0.0, 1.0});
        res = mc_integrate(
            [&](std::span<const double> u) {
                Point4 x, xp;
                const double w1 = a.draw(u.data(), x, true);
                const double w2 = b.draw(u.data() + 4, xp, true);
                const double tau = x[0] - xp[0];
                const double r = spatial_distance(x, xp);
                return w1 * w2 * log_kernel_separation(tau, r, eps, ell);
            },
            box, cfg.mc_samples, cfg.seed);
    }
    const double scale = cfg.method == SmearingMethod::reduced
                             ? total_derivative_prefactor * s1.amplitude * s2.amplitude
                             : total_derivative_prefactor;
    res.value *= scale;
    res.error_estimate *= std::abs(scale);
    return res;
}

QuadratureResult direct_smeared_reduced(const TestFunctionSpec& s1, const TestFunctionSpec& s2,
                                        int quadrature_order) {
    s1.validate();
    s2.validate();
    if (!supports_spacelike_separated(s1, s2))
        throw DomainError("direct_smeared_reduced: supports must be compact and spacelike separated");
    PairIntegrator p(s1, s2, false,
                     [](double tau, double r) { return em_corr(SpacetimeSeparation{tau, r, 0.0}); },
                     false);
    QuadratureResult res = p.integrate(quadrature_order);
    const double scale = s1.amplitude * s2.amplitude;
    res.value *= scale;
    res.error_estimate *= std::abs(scale);
    return res;
}

QuadratureResult direct_smeared_mc(const TestFunctionSpec& s1, const TestFunctionSpec& s2,
                                   std::int64_t samples, std::uint64_t seed) {
    s1.validate();
    s2.validate();
    if (!supports_spacelike_separated(s1, s2))
        throw DomainError("direct_smeared_mc: supports must be compact and spacelike separated");
    const Sampler a(s1), b(s2);
    std::vector<Interval> box(8, Interval{0.0, 1.0});
    return mc_integrate(
        [&](std::span<const double> u) {
            Point4 x, xp;
            const double w1 = a.draw(u.data(), x, false);
            const double w2 = b.draw(u.data() + 4, xp, false);
            if (w1 == 0.0 || w2 == 0.0)
                return 0.0;
            return w1 * w2 *
                   em_corr(SpacetimeSeparation{x[0] - xp[0], spatial_distance(x, xp), 0.0});
        },
        box, samples, seed);
}

EllScan ell_invariance_scan(const TestFunctionSpec& s1, const TestFunctionSpec& s2,
                            const SmearingConfig& cfg, const std::vector<double>& ell_factors,
                            int threads) {
    if (ell_factors.empty())
        throw DomainError("ell_invariance_scan: empty factor list");
    if (threads < 1)
        throw DomainError("ell_invariance_scan: threads must be at least 1");
    EllScan scan;
    for (double f : ell_factors) {
        if (!(f > 0.0))
            throw DomainError("ell_invariance_scan: factors must be positive");
        scan.rows.push_back({f, cfg.ell * f, {}});
    }
    auto work = [&](std::size_t i) {
        SmearingConfig c = cfg;
        c.ell = scan.rows[i].ell;
        scan.rows[i].K = smeared_K(s1, s2, c);
    };
    if (threads == 1) {
        for (std::size_t i = 0; i < scan.rows.size(); ++i)
            work(i);
    } else {
        std::vector<std::future<void>> jobs;
        std::atomic<std::size_t> next{0};
        const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(threads), scan.rows.size());
        for (std::size_t t = 0; t < n; ++t)
            jobs.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < scan.rows.size(); i = next++)
                    work(i);
            }));
        for (auto& j : jobs)
            j.get();
    }
    for (std::size_t i = 0; i < scan.rows.size(); ++i)
        for (std::size_t j = i + 1; j < scan.rows.size(); ++j) {
            const double a = scan.rows[i].K.value, b = scan.rows[j].K.value;
            const double den = std::max(std::abs(a), std::abs(b));
            if (den > 0.0)
                scan.max_relative_deviation =
                    std::max(scan.max_relative_deviation, std::abs(a - b) / den);
        }
    return scan;
}

CsvTable EllScan::to_csv() const {
    CsvTable t;
    t.metadata = {{"max_relative_deviation", format_double(max_relative_deviation)}};
    t.columns = {"factor", "ell", "K", "error_estimate"};
    for (const auto& r : rows)
        t.add_numeric_row(std::vector<double>{r.factor, r.ell, r.K.value, r.K.error_estimate});
    return t;
}

} // namespace negspec
