// cli.hpp - the vsi-sim command line: subcommands, CSV writer, exit codes.
#pragma once

#include <ostream>
#include <string>

#include "vsi/config.hpp"
#include "vsi/lc_atlas.hpp"

namespace vsi {

inline constexpr const char* kToolName = "vsi-sim";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// %.17g, so every double survives a text round trip.
std::string format_double(double v);

// Rows of the validate subcommand.
struct CheckRow {
    std::string check;
    double value{0.0};
    double tolerance{0.0};
    bool pass{false};
};
std::vector<CheckRow> validation_checks(const RunConfig& c);

// Allowed RF transitions (Delta m_s = +-1, nucleus kept) of GS and ES at a
// field, from the secular energies. Used to annotate frequency sweeps.
struct RfLine {
    std::string name;
    double frequency_MHz{0.0};
};
std::vector<RfLine> rf_lines(const SpinSystem& sys, double b_mT);

} // namespace vsi
