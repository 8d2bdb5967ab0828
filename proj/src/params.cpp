#include "omsim/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "omsim/constants.hpp"
#include "omsim/errors.hpp"

namespace omsim {

OpticalParams derive_optical_params(double length_m, double finesse,
                                    double wavelength_m) {
    if (!(length_m > 0.0) || !(finesse > 0.0) || !(wavelength_m > 0.0))
        throw parameter_error("optical parameters must all be positive");
    if (finesse < 100.0)
        throw parameter_error("finesse below 100 is outside the supported range");

    OpticalParams p;
    p.length_m = length_m;
    p.finesse = finesse;
    p.wavelength_m = wavelength_m;
    p.gamma = std::numbers::pi / finesse;
    if (p.gamma >= 0.01)
        throw model_validity_error(
            "cavity damping gamma = pi/finesse = " + std::to_string(p.gamma) +
            " is too large for the small-damping cavity model (need < 0.01)");
    p.roundtrip_s = 2.0 * length_m / kConst.c;
    p.bandwidth_rad_s = p.gamma / p.roundtrip_s;
    p.wavevector = 2.0 * std::numbers::pi / wavelength_m;
    return p;
}

MechanicalParams derive_mechanical_params(double resonance_rad_s,
                                          double mass_kg, double quality) {
    if (!(resonance_rad_s > 0.0) || !(mass_kg > 0.0) || !(quality > 0.0))
        throw parameter_error("mechanical parameters must all be positive");
    if (!(quality > 1.0))
        throw parameter_error("mechanical quality factor must exceed 1");

    MechanicalParams m;
    m.resonance_rad_s = resonance_rad_s;
    m.mass_kg = mass_kg;
    m.quality = quality;
    m.damping_rad_s = resonance_rad_s / quality;
    return m;
}

DriveState derive_drive_state(const OpticalParams& optical, double power_w,
                              double detuning_over_gamma) {
    if (!(power_w >= 0.0))
        throw parameter_error("drive power must be non-negative");

    DriveState d;
    d.power_w = power_w;
    d.detuning_over_gamma = detuning_over_gamma;
    d.detuning = detuning_over_gamma * optical.gamma;
    const double photon_energy =
        kConst.hbar * 2.0 * std::numbers::pi * kConst.c / optical.wavelength_m;
    d.input_flux = power_w / photon_energy;
    const double lorentz = optical.gamma * optical.gamma + d.detuning * d.detuning;
    d.intracavity_flux = 2.0 * optical.gamma * d.input_flux / lorentz;
    d.phase_gain = 4.0 * optical.wavevector * optical.gamma *
                   std::sqrt(d.input_flux) / lorentz;
    return d;
}

Complex cavity_denominator(const OpticalParams& optical, double detuning,
                           double omega) {
    const Complex a(optical.gamma, -omega * optical.roundtrip_s);
    return a * a + detuning * detuning;
}

}  // namespace omsim
