// observables.hpp - PL intensity, its field derivative, ODMR spectra and the
// population-ratio signal, evaluated point by point or as sweeps.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vsi/steady_state.hpp"

namespace vsi {

enum class SweepVariable { FieldMT, RfFrequencyMHz };
enum class Normalization { None, MaxAbs, PerTransition };
// Field-swept ODMR: ratio S1/S2 of GS population differences (lab frame), or
// PL(rf on) - PL(rf off) in the rotating frame.
enum class OdmrFieldMethod { PopulationRatio, PlDifference };

struct ModelOptions {
    IscAssignment isc{IscAssignment::ByGroup};
    bool perturbations_in_odmr{false};
    OdmrFieldMethod odmr_field_method{OdmrFieldMethod::PopulationRatio};
    int threads{1};
};

struct SweepSpec {
    SweepVariable variable{SweepVariable::FieldMT};
    double start{0.0}, stop{20.0};
    int points{1000};
    FieldConfig fixed{0.0, 0.1, 0.0, true};
    double derivative_step_mT{0.02};
    Normalization normalization{Normalization::MaxAbs};
    std::vector<std::pair<double, double>> windows_MHz;
};

void validate(const SweepSpec& s);
std::vector<double> abscissas(const SweepSpec& s);

struct SweepResult {
    std::string quantity;       // e.g. "pl_per_ns"
    std::string abscissa_name;  // "field_mT" or "rf_frequency_MHz"
    SweepSpec spec;
    std::vector<double> x, raw, value;
    // worst diagnostics over all solves
    double max_residual{0.0};
    double min_eigenvalue{0.0};
    int positivity_warnings{0};
    int max_constraints{1};
};

inline double mhz_to_rad_ns(double f) { return 2.0 * std::numbers::pi * f * 1e-3; }
inline double rad_ns_to_mhz(double w) { return w / (2.0 * std::numbers::pi * 1e-3); }

// k1_fl Tr(P_{+-1/2}^ES rho) + k2_fl Tr(P_{+-3/2}^ES rho)
double pl_intensity(const CMat& rho, const RateScheme& rates);

struct RelativeOdmr {
    double s1{0.0}, s2{0.0}, ratio{0.0};
    bool degenerate{false}; // |s2| < 1e-14; ratio is NaN then
};
// s1 = P(-3/2) - P(-1/2), s2 = P(3/2) - P(1/2), GS populations.
RelativeOdmr relative_odmr(const CMat& rho);

// Single-point steady states.
SteadyState lab_steady_state(const SpinSystem& sys, const RateScheme& rates, double b_mT,
                             const ModelOptions& opt = {});
SteadyState rotating_steady_state(const SpinSystem& sys, const RateScheme& rates,
                                  const FieldConfig& field, const ModelOptions& opt = {});

double pl_at_field(const SpinSystem& sys, const RateScheme& rates, double b_mT,
                   const ModelOptions& opt = {});
// PL(rf on) - PL(rf off), both in the rotating frame.
double odmr_signal(const SpinSystem& sys, const RateScheme& rates, const FieldConfig& field,
                   const ModelOptions& opt = {});

SweepResult pl_field_sweep(const SpinSystem& sys, const RateScheme& rates, const SweepSpec& spec,
                           const ModelOptions& opt = {});
SweepResult pl_derivative_sweep(const SpinSystem& sys, const RateScheme& rates,
                                const SweepSpec& spec, const ModelOptions& opt = {});
SweepResult odmr_frequency_sweep(const SpinSystem& sys, const RateScheme& rates,
                                 const SweepSpec& spec, const ModelOptions& opt = {});
SweepResult odmr_field_sweep(const SpinSystem& sys, const RateScheme& rates,
                             const SweepSpec& spec, const ModelOptions& opt = {});

// Frequency windows used by per-transition normalization when none are given:
// split at the geometric mean of the zero-field GS and ES lines (2D / 2pi).
std::vector<std::pair<double, double>> default_windows_MHz(const SpinSystem& sys,
                                                           const SweepSpec& spec);

// Apply spec.normalization to raw values.
std::vector<double> normalize(const std::vector<double>& x, const std::vector<double>& raw,
                              Normalization mode,
                              const std::vector<std::pair<double, double>>& windows);

} // namespace vsi
