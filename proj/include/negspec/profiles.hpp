#pragma once

#include <limits>
#include <vector>

namespace negspec {

// Polynomial with ascending coefficients.
struct Polynomial {
    std::vector<double> c;

    double operator()(double x) const;
    Polynomial derivative() const;
    Polynomial antiderivative() const;
    Polynomial times_x() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator*(double s) const;
    Polynomial operator*(const Polynomial& o) const;
    static Polynomial binomial_power(double a, double b, int n); // (a + b x)^n
};

// p(t) exp(-c t^2) on |t| < support, zero outside
struct TimeProfile {
    Polynomial p;
    double c = 0.0;
    double support = std::numeric_limits<double>::infinity();

    double operator()(double t) const;
    double envelope(double t) const { return p(t); } // without the Gaussian factor
    TimeProfile second_derivative() const;
};

// p(w) exp(-c w) with w = rho^2, on rho < support
struct RadialProfile {
    Polynomial p;
    double c = 0.0;
    double support = std::numeric_limits<double>::infinity();

    double operator()(double rho) const;
    double envelope(double rho) const { return p(rho * rho); }
    RadialProfile laplacian() const;
    // B(rho) = int_0^rho v b(v) dv
    double moment(double rho) const;
};

} // namespace negspec
