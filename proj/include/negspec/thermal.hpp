#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "negspec/kernels.hpp"
#include "negspec/table.hpp"

namespace negspec {

struct ImageSumControl {
    std::int64_t max_terms = 1000000;
    double tail_tol = 1e-12;

    void validate() const;
};

// C_T(0, r) = (2/pi^4) sum_{n >= 1} (3r^2 - n^2 b^2)(r^2 - 3n^2 b^2) / (r^2 + n^2 b^2)^6
double thermal_corr_imagesum(double r, const ThermalState& state, const ImageSumControl& ctl = {});

struct ImageSumResult {
    double value = 0.0;
    std::int64_t terms = 0;
    double tail_bound = 0.0;
};
ImageSumResult thermal_corr_imagesum_detailed(double r, const ThermalState& state,
                                              const ImageSumControl& ctl = {});

// t_n = k^4 exp(-n beta k) / (480 pi^5 beta n), n = 1..N
std::vector<double> thermal_power_image_decomposition(double k, const ThermalState& state,
                                                      std::int64_t N);

// Root of em_power_total(k, 1/T) on [0.5k, 2k].
double crossover_temperature(double k);

// Golden ratio closed form T_c = k / (2 ln((1 + sqrt 5)/2)).
double crossover_temperature_closed_form(double k);

// vacuum, thermal and total channels over a temperature grid; the abscissa column holds T
std::vector<SpectrumTable> fig1_table(double k, std::span<const double> T_grid);

} // namespace negspec
