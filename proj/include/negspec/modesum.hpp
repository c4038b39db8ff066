#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "negspec/constants.hpp"
#include "negspec/regquad.hpp"
#include "negspec/table.hpp"

namespace negspec {

// Phase of the vacuum mode product: cos((w1 + w) tau), or the difference cos((w1 - w) tau).
enum class ModePhase { sum, difference };

struct ModeSumConfig {
    double box_side = 2.0 * pi;
    double cutoff = 10.0;
    std::array<int, 3> k_index{1, 0, 0};
    ModePhase phase = ModePhase::sum;

    double spacing() const; // 2 pi / L
    double k_magnitude() const;
    void validate() const;
};

// (1 / (2 (2 pi)^6)) sum_{|q| <= cutoff} cos(phase tau) exp(-alpha w) / (w w1)
double discrete_mode_corr(const ModeSumConfig& cfg, double tau, double alpha = 0.0);

struct DivergenceRow {
    double cutoff = 0.0;
    double value = 0.0;
};

struct DivergenceScan {
    std::vector<DivergenceRow> rows;
    double log_log_slope = 0.0;
};

DivergenceScan divergence_scan(const ModeSumConfig& base, double tau,
                               const std::vector<double>& cutoffs);

// Infinite volume density at finite Abel regulator alpha.
double continuum_mode_regulated(double k, double tau, double alpha,
                                ModePhase phase = ModePhase::sum);

RegulatorSchedule default_mode_schedule(double tau);

double continuum_mode_coefficient(double k, double tau,
                                  const std::optional<RegulatorSchedule>& schedule = {},
                                  ModePhase phase = ModePhase::sum);

struct ContinuumRow {
    double tau = 0.0;
    double value = 0.0;
    double reference = 0.0;
    double relative_error = 0.0;
};

struct OrderOfLimitsReport {
    double k = 0.0;
    ModeSumConfig lattice;
    DivergenceScan tau0_scan;
    bool tau0_continuum_diverged = false;
    std::string tau0_continuum_message;
    std::vector<ContinuumRow> continuum;
    double tau_limit = 0.0;
    double tau_limit_error = 0.0;
    double tau_limit_reference = 0.0;
    double tau_limit_relative_error = 0.0;
    bool difference_phase_diverged = false;

    CsvTable to_csv() const;
    std::string summary() const;
};

std::vector<double> default_tau_nodes();

OrderOfLimitsReport order_of_limits_report(double k, const std::vector<double>& tau_list,
                                           const std::vector<double>& cutoffs,
                                           const std::optional<RegulatorSchedule>& schedule = {});

} // namespace negspec
