#ifndef OMSIM_PARAMS_HPP
#define OMSIM_PARAMS_HPP

#include <complex>

namespace omsim {

using Complex = std::complex<double>;

// Single-port Fabry-Perot cavity. All derived rates follow from the
// round-trip picture: gamma = pi/finesse is the amplitude damping per
// round trip, tau = 2L/c the round-trip time, and the cavity bandwidth
// is their ratio. gamma must stay small against unity for the
// linearized input-output relations to hold.
struct OpticalParams {
    double length_m = 0.0;
    double finesse = 0.0;
    double wavelength_m = 0.0;
    // derived
    double gamma = 0.0;            // pi / finesse, dimensionless
    double roundtrip_s = 0.0;      // tau = 2 L / c
    double bandwidth_rad_s = 0.0;  // Omega_cav = gamma / tau
    double wavevector = 0.0;       // k = 2 pi / lambda, rad/m
};

OpticalParams derive_optical_params(double length_m, double finesse,
                                    double wavelength_m);

// One internal vibration mode of the end mirror, treated as a damped
// harmonic oscillator.
struct MechanicalParams {
    double resonance_rad_s = 0.0;  // Omega_M
    double mass_kg = 0.0;
    double quality = 0.0;
    double damping_rad_s = 0.0;    // Gamma = Omega_M / Q
};

MechanicalParams derive_mechanical_params(double resonance_rad_s,
                                          double mass_kg, double quality);

// Probe beam state. The detuning is the mean round-trip phase offset
// psi, accepted in units of gamma; negative values sit on the red
// (cooling) side. Intensities are photon fluxes: |a_in|^2 = P / (hbar
// omega_laser). The sign convention is calibrated so that negative
// detuning shifts the effective resonance down and increases damping.
struct DriveState {
    double power_w = 0.0;
    double detuning_over_gamma = 0.0;
    double detuning = 0.0;           // psi = detuning_over_gamma * gamma
    double input_flux = 0.0;         // |a_in|^2, photons/s
    double intracavity_flux = 0.0;   // Ibar = 2 gamma |a_in|^2 / (gamma^2 + psi^2)
    double phase_gain = 0.0;         // xi = 4 k gamma |a_in| / (gamma^2 + psi^2)
};

DriveState derive_drive_state(const OpticalParams& optical, double power_w,
                              double detuning_over_gamma);

// Quadratic cavity response factor (gamma - i Omega tau)^2 + psi^2 that
// appears in every detuned transfer coefficient.
Complex cavity_denominator(const OpticalParams& optical, double detuning,
                           double omega);

}  // namespace omsim

#endif
