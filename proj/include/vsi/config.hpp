// config.hpp - run configuration: strict JSON parsing and canonical echo.
#pragma once

#include <string>

#include "json.hpp"
#include "vsi/observables.hpp"

namespace vsi {

// Sweep settings shared by all subcommands; each picks the pieces it needs.
struct SweepSettings {
    double field_start_mT{0.0}, field_stop_mT{20.0};
    double freq_start_MHz{0.0}, freq_stop_MHz{500.0};
    int points{1000};
    double b_mT{0.0};               // static field of frequency sweeps
    double b1_mT{0.1};
    double rf_frequency_MHz{1.0};   // fixed drive of field-swept ODMR (pl_difference)
    double derivative_step_mT{0.02};
    Normalization normalization{Normalization::MaxAbs};
    std::vector<std::pair<double, double>> windows_MHz;
};

struct RunConfig {
    // Tilt as entered; system.theta_rad is derived from it so that the echo
    // is exact.
    double theta_deg{5.0};
    SpinSystem system;
    RateScheme rates;
    SweepSettings sweep;
    ModelOptions model;
};

// Throws ConfigError on malformed input, unknown keys or invalid values.
// Accepts either a bare config object or a run manifest carrying one under
// "config". Missing keys keep their defaults.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Complete canonical form; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& c);

SweepSpec field_sweep_spec(const RunConfig& c);
SweepSpec frequency_sweep_spec(const RunConfig& c);

std::string normalization_name(Normalization n);
Normalization parse_normalization(const std::string& s); // ConfigError on unknown

} // namespace vsi
