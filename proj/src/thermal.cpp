#include "negspec/thermal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"
#include "negspec/regquad.hpp"
#include "negspec/simd/dispatch.hpp"

namespace negspec {

void ImageSumControl::validate() const {
    if (max_terms < 1)
        throw DomainError("ImageSumControl: max_terms must be at least 1");
    if (!(tail_tol > 0.0))
        throw DomainError("ImageSumControl: tail_tol must be positive");
}

ImageSumResult thermal_corr_imagesum_detailed(double r, const ThermalState& state,
                                              const ImageSumControl& ctl) {
    ctl.validate();
    if (!(r >= 0.0) || !std::isfinite(r))
        throw DomainError("thermal_corr_imagesum: r must be non-negative and finite");
    const double beta = state.beta;
    const double b8 = std::pow(beta, 8);

    std::array<double, 4096> buf{};
    NeumaierSum sum;
    double abs_sum = 0.0;
    std::int64_t n = 1;
    std::size_t block = 64;
    ImageSumResult res;
    while (n <= ctl.max_terms) {
        const auto count = static_cast<std::size_t>(
            std::min<std::int64_t>(static_cast<std::int64_t>(block), ctl.max_terms - n + 1));
        simd::image_terms(r, beta, n, count, buf.data());
        for (std::size_t i = 0; i < count; ++i) {
            sum.add(buf[i]);
            abs_sum += std::abs(buf[i]);
        }
        n += static_cast<std::int64_t>(count);
        const double N = static_cast<double>(n - 1);
        // every term is bounded by 4 / (n beta)^8
        const double tail = 4.0 / (7.0 * b8 * std::pow(N, 7));
        res.terms = n - 1;
        res.tail_bound = 2.0 / pi4 * tail;
        if (tail <= ctl.tail_tol * abs_sum) {
            res.value = 2.0 / pi4 * sum.value();
            return res;
        }
        block = std::min<std::size_t>(block * 2, buf.size());
    }
    throw TailNotConverged("thermal_corr_imagesum: tail bound above tolerance after " +
                           std::to_string(ctl.max_terms) + " terms");
}

double thermal_corr_imagesum(double r, const ThermalState& state, const ImageSumControl& ctl) {
    return thermal_corr_imagesum_detailed(r, state, ctl).value;
}

std::vector<double> thermal_power_image_decomposition(double k, const ThermalState& state,
                                                      std::int64_t N) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("thermal_power_image_decomposition: k must be positive");
    if (N < 1)
        throw DomainError("thermal_power_image_decomposition: N must be at least 1");
    const double k4 = k * k * k * k;
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(N));
    for (std::int64_t n = 1; n <= N; ++n) {
        const double dn = static_cast<double>(n);
        terms.push_back(k4 * std::exp(-dn * state.beta * k) / (480.0 * pi5 * state.beta * dn));
    }
    return terms;
}

double crossover_temperature(double k) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("crossover_temperature: k must be positive");
    auto g = [k](double T) { return em_power_total(k, ThermalState::from_temperature(T)); };
    double lo = 0.5 * k;
    double hi = 2.0 * k;
    double glo = g(lo);
    const double ghi = g(hi);
    if (!(glo < 0.0 && ghi > 0.0))
        throw BracketFailure("crossover_temperature: no sign change on [0.5k, 2k]");
    while (hi - lo > 1e-12 * k) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi))
            break;
        const double gm = g(mid);
        if (gm == 0.0)
            return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    double T = 0.5 * (lo + hi);
    for (int i = 0; i < 2; ++i) {
        const double d = thermal_power_dT(k, ThermalState::from_temperature(T));
        if (d == 0.0)
            break;
        const double next = T - g(T) / d;
        if (next > 0.5 * k && next < 2.0 * k)
            T = next;
    }
    return T;
}

double crossover_temperature_closed_form(double k) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("crossover_temperature_closed_form: k must be positive");
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    return k / (2.0 * std::log(phi));
}

std::vector<SpectrumTable> fig1_table(double k, std::span<const double> T_grid) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("fig1_table: k must be positive");
    std::vector<SpectrumTable> tables{{Channel::vacuum, {}, {}},
                                      {Channel::thermal, {}, {}},
                                      {Channel::total, {}, {}}};
    tables[0].metadata = {{"k", format_double(k)}, {"abscissa", "T"}};
    const double p0 = em_ft_kernel(0.0, k);
    for (double T : T_grid) {
        const ThermalState st = ThermalState::from_temperature(T);
        const double pt = thermal_power(k, st);
        tables[0].add(T, p0);
        tables[1].add(T, pt);
        tables[2].add(T, p0 + pt);
    }
    return tables;
}

} // namespace negspec
