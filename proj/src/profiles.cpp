#include "negspec/profiles.hpp"

#include <algorithm>
#include <cmath>

namespace negspec {

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    for (std::size_t i = 1; i < c.size(); ++i)
        d.c.push_back(c[i] * static_cast<double>(i));
    return d;
}

Polynomial Polynomial::antiderivative() const {
    Polynomial a;
    a.c.push_back(0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
        a.c.push_back(c[i] / static_cast<double>(i + 1));
    return a;
}

Polynomial Polynomial::times_x() const {
    Polynomial r;
    r.c.push_back(0.0);
    r.c.insert(r.c.end(), c.begin(), c.end());
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r;
    r.c.assign(std::max(c.size(), o.c.size()), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
        r.c[i] += c[i];
    for (std::size_t i = 0; i < o.c.size(); ++i)
        r.c[i] += o.c[i];
    return r;
}

Polynomial Polynomial::operator*(double s) const {
    Polynomial r = *this;
    for (double& x : r.c)
        x *= s;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r;
    if (c.empty() || o.c.empty())
        return r;
    r.c.assign(c.size() + o.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < o.c.size(); ++j)
            r.c[i + j] += c[i] * o.c[j];
    return r;
}

Polynomial Polynomial::binomial_power(double a, double b, int n) {
    Polynomial r{{1.0}};
    const Polynomial f{{a, b}};
    for (int i = 0; i < n; ++i)
        r = r * f;
    return r;
}

double TimeProfile::operator()(double t) const {
    if (!(std::abs(t) < support))
        return 0.0;
    const double v = p(t);
    return c > 0.0 ? v * std::exp(-c * t * t) : v;
}

TimeProfile TimeProfile::second_derivative() const {
    // (p e^{-ct^2})' = (p' - 2 c t p) e^{-ct^2}
    auto d = [this](const Polynomial& q) { return q.derivative() + q.times_x() * (-2.0 * c); };
    return TimeProfile{d(d(p)), c, support};
}

double RadialProfile::operator()(double rho) const {
    if (!(rho < support))
        return 0.0;
    const double w = rho * rho;
    const double v = p(w);
    return c > 0.0 ? v * std::exp(-c * w) : v;
}

RadialProfile RadialProfile::laplacian() const {
    // radial Laplacian of F(w) = p(w) e^{-cw} is (4 w F'' + 6 F') in w
    const Polynomial d1 = p.derivative() + p * (-c);
    const Polynomial d2 = d1.derivative() + d1 * (-c);
    return RadialProfile{d2.times_x() * 4.0 + d1 * 6.0, c, support};
}

double RadialProfile::moment(double rho) const {
    const double r = std::min(std::abs(rho), support);
    const double s = r * r;
    if (c == 0.0)
        return 0.5 * p.antiderivative()(s);
    // int_0^s q(x) e^{-cx} dx = F(s) - F(0), F = -e^{-cx} sum_k q^(k)(x) / c^(k+1)
    auto F = [this](double x) {
        double acc = 0.0;
        Polynomial q = p;
        double ck = c;
        while (!q.c.empty()) {
            acc += q(x) / ck;
            q = q.derivative();
            ck *= c;
        }
        return -std::exp(-c * x) * acc;
    };
    return 0.5 * (F(s) - F(0.0));
}

} // namespace negspec
