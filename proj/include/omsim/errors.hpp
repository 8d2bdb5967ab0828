#ifndef OMSIM_ERRORS_HPP
#define OMSIM_ERRORS_HPP

#include <stdexcept>

namespace omsim {

// Base class for everything thrown by the library.
struct simulation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inputs outside the physical domain (negative power, Q <= 1, ...).
struct parameter_error : simulation_error {
    using simulation_error::simulation_error;
};

// Formally valid parameters that break the small-damping cavity model.
struct model_validity_error : simulation_error {
    using simulation_error::simulation_error;
};

// Quantities undefined without drive power (zeta, quantum noise spectra).
struct zero_power_error : parameter_error {
    using parameter_error::parameter_error;
};

// Optical anti-damping exceeds the intrinsic mechanical damping.
struct instability_error : simulation_error {
    using simulation_error::simulation_error;
};

// chi_eff^-1 cancelled to numerical zero; only reachable at the
// instability boundary where the linearized model stops applying.
struct singular_inverse_error : simulation_error {
    using simulation_error::simulation_error;
};

// Frequency grid violates an operation's coverage or step contract.
struct grid_error : simulation_error {
    using simulation_error::simulation_error;
};

// Config file problems: syntax, unknown/missing keys, range violations.
struct config_error : simulation_error {
    using simulation_error::simulation_error;
};

// Filesystem failures, annotated with the offending path.
struct io_error : simulation_error {
    using simulation_error::simulation_error;
};

}  // namespace omsim

#endif
