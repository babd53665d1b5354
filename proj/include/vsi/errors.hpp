#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace vsi {

// Raised by the steady-state solver when the bordered system is numerically
// singular. `abscissa` is filled in by sweeps so the CLI can report where.
struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what,
                            double at = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(what), abscissa(at) {}
    double abscissa;
};

struct StepTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoCrossingInWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateGamma : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VanishingDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input (config file, flags). Maps to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace vsi
