// features.hpp - locating peaks and dips in sampled curves.
#pragma once

#include <vector>

namespace vsi {

struct Extremum {
    int index{0};
    double x{0.0}, y{0.0};
    bool is_max{true};
    // Height above (max) or depth below (min) the higher of the two bases,
    // the bases being the lowest (highest) points between this extremum and
    // the nearest higher (lower) sample on each side, or the curve ends.
    double prominence{0.0};
    // Width at half prominence, with linear interpolation between samples.
    double width{0.0};
};

// All strict local extrema of y(x) with flat runs collapsed to their centre.
// Interior points only.
std::vector<Extremum> find_extrema(const std::vector<double>& x, const std::vector<double>& y);

// Extrema whose prominence exceeds rel_threshold * max|y|.
std::vector<Extremum> resolvable_extrema(const std::vector<double>& x, const std::vector<double>& y,
                                         double rel_threshold);

} // namespace vsi
