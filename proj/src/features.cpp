#include "vsi/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsi {

namespace {

// Prominence and half-prominence width of a maximum of y at index i (flat run
// [lo, hi]). Minima are handled by the caller negating y.
void measure_peak(const std::vector<double>& x, const std::vector<double>& y, int lo, int hi,
                  Extremum& e) {
    const int n = static_cast<int>(y.size());
    const double top = y[static_cast<size_t>(lo)];

    double left_base = top;
    int l = lo;
    while (l > 0 && y[static_cast<size_t>(l - 1)] <= top) {
        --l;
        left_base = std::min(left_base, y[static_cast<size_t>(l)]);
    }
    double right_base = top;
    int r = hi;
    while (r < n - 1 && y[static_cast<size_t>(r + 1)] <= top) {
        ++r;
        right_base = std::min(right_base, y[static_cast<size_t>(r)]);
    }
    e.prominence = top - std::max(left_base, right_base);

    const double level = top - 0.5 * e.prominence;
    double xl = x[static_cast<size_t>(l)];
    for (int k = lo; k > l; --k) {
        const double a = y[static_cast<size_t>(k - 1)], b = y[static_cast<size_t>(k)];
        if (a <= level) {
            const double f = (b - level) / (b - a);
            xl = x[static_cast<size_t>(k)] - f * (x[static_cast<size_t>(k)] - x[static_cast<size_t>(k - 1)]);
            break;
        }
    }
    double xr = x[static_cast<size_t>(r)];
    for (int k = hi; k < r; ++k) {
        const double a = y[static_cast<size_t>(k)], b = y[static_cast<size_t>(k + 1)];
        if (b <= level) {
            const double f = (a - level) / (a - b);
            xr = x[static_cast<size_t>(k)] + f * (x[static_cast<size_t>(k + 1)] - x[static_cast<size_t>(k)]);
            break;
        }
    }
    e.width = xr - xl;
}

} // namespace

std::vector<Extremum> find_extrema(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("find_extrema: size mismatch");
    const int n = static_cast<int>(y.size());
    std::vector<Extremum> out;
    std::vector<double> neg(y.size());
    std::transform(y.begin(), y.end(), neg.begin(), [](double v) { return -v; });

    int i = 1;
    while (i < n - 1) {
        // collapse a flat run starting at i
        int j = i;
        while (j < n - 1 && y[static_cast<size_t>(j + 1)] == y[static_cast<size_t>(i)]) ++j;
        if (j >= n - 1) break;
        const double prev = y[static_cast<size_t>(i - 1)], next = y[static_cast<size_t>(j + 1)];
        const double v = y[static_cast<size_t>(i)];
        const bool is_max = v > prev && v > next;
        const bool is_min = v < prev && v < next;
        if (is_max || is_min) {
            Extremum e;
            e.index = (i + j) / 2;
            e.x = x[static_cast<size_t>(e.index)];
            e.y = y[static_cast<size_t>(e.index)];
            e.is_max = is_max;
            measure_peak(x, is_max ? y : neg, i, j, e);
            out.push_back(e);
        }
        i = j + 1;
    }
    return out;
}

std::vector<Extremum> resolvable_extrema(const std::vector<double>& x, const std::vector<double>& y,
                                         double rel_threshold) {
    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    std::vector<Extremum> out;
    for (const auto& e : find_extrema(x, y))
        if (e.prominence > rel_threshold * scale) out.push_back(e);
    return out;
}

} // namespace vsi
