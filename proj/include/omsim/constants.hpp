#ifndef OMSIM_CONSTANTS_HPP
#define OMSIM_CONSTANTS_HPP

namespace omsim {

// Fixed CODATA 2018 values, SI units. Never user-configurable.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;  // J s
    double c = 299792458.0;         // m / s
    double kb = 1.380649e-23;       // J / K
};

inline constexpr PhysicalConstants kConst{};

}  // namespace omsim

#endif
