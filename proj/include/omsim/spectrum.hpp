#ifndef OMSIM_SPECTRUM_HPP
#define OMSIM_SPECTRUM_HPP

#include <cstddef>
#include <vector>

namespace omsim {

enum class TraceUnit {
    m2_per_hz,      // one-sided displacement PSD
    dimensionless,  // normalized response
};

// Frequency grid (rad/s, strictly increasing) plus real-valued samples.
struct SpectrumTrace {
    std::vector<double> omega;
    std::vector<double> value;
    TraceUnit unit = TraceUnit::m2_per_hz;
};

// Uniform grid of n points covering [start, stop], rad/s.
std::vector<double> make_linear_grid(double start_rad_s, double stop_rad_s,
                                     std::size_t n);

// Throws grid_error unless strictly increasing with at least two points.
void validate_grid(const std::vector<double>& grid);

// Linear interpolation; omega must lie within the trace's grid.
double interpolate(const SpectrumTrace& trace, double omega);

}  // namespace omsim

#endif
