#include "omsim/spectrum.hpp"

#include <algorithm>

#include "omsim/errors.hpp"

namespace omsim {

std::vector<double> make_linear_grid(double start_rad_s, double stop_rad_s,
                                     std::size_t n) {
    if (n < 2) throw grid_error("frequency grid needs at least two points");
    if (!(start_rad_s < stop_rad_s))
        throw grid_error("frequency grid start must lie below stop");
    std::vector<double> grid(n);
    const double step = (stop_rad_s - start_rad_s) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = start_rad_s + step * static_cast<double>(i);
    grid.back() = stop_rad_s;
    return grid;
}

void validate_grid(const std::vector<double>& grid) {
    if (grid.size() < 2)
        throw grid_error("frequency grid needs at least two points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw grid_error("frequency grid must be strictly increasing");
}

double interpolate(const SpectrumTrace& trace, double omega) {
    if (trace.omega.size() < 2 || trace.omega.size() != trace.value.size())
        throw grid_error("trace is empty or inconsistent");
    if (omega < trace.omega.front() || omega > trace.omega.back())
        throw grid_error("frequency outside the trace grid");
    const auto it =
        std::lower_bound(trace.omega.begin(), trace.omega.end(), omega);
    const auto hi = static_cast<std::size_t>(it - trace.omega.begin());
    if (hi == 0) return trace.value.front();
    const auto lo = hi - 1;
    const double t =
        (omega - trace.omega[lo]) / (trace.omega[hi] - trace.omega[lo]);
    return trace.value[lo] + t * (trace.value[hi] - trace.value[lo]);
}

}  // namespace omsim
