#ifndef OMSIM_RESPONSE_HPP
#define OMSIM_RESPONSE_HPP

#include <vector>

#include "omsim/params.hpp"

namespace omsim {

// Bare Lorentzian susceptibility of the mirror mode, m/N.
Complex mechanical_susceptibility(const MechanicalParams& mech, double omega);

// chi^-1, N/m. mechanical_susceptibility is exactly its reciprocal.
Complex susceptibility_inverse(const MechanicalParams& mech, double omega);

// Radiation-pressure back-action coefficient K_opt(Omega) =
// 8 hbar k^2 Ibar psi / Delta(Omega), N/m. The back-action forces on the
// mirror are -K_opt X_m and -K_opt X_sig. Exactly zero for a resonant
// cavity (psi = 0) or an undriven one (Ibar = 0).
Complex backaction_coefficient(const OpticalParams& optical,
                               const DriveState& drive, double omega);

// chi_eff^-1 = chi^-1 + K_opt.
Complex effective_susceptibility_inverse(const MechanicalParams& mech,
                                         const OpticalParams& optical,
                                         const DriveState& drive, double omega);

// Effective susceptibility with back-action folded in. Falls back to the
// bare susceptibility bit-for-bit when K_opt vanishes.
Complex effective_susceptibility(const MechanicalParams& mech,
                                 const OpticalParams& optical,
                                 const DriveState& drive, double omega);

// |chi_eff / chi|^2: the factor by which a cavity-length signal is
// amplified (or attenuated) by the mirror motion it drives.
double amplification_factor(const MechanicalParams& mech,
                            const OpticalParams& optical,
                            const DriveState& drive, double omega);

// Damping of the locally reduced effective oscillator at omega,
// -Im[chi_eff^-1] / (M omega). Positive for any stable configuration.
double local_effective_damping(const MechanicalParams& mech,
                               const OpticalParams& optical,
                               const DriveState& drive, double omega);

struct EffectiveModeParams {
    double omega_eff = 0.0;  // location of max |chi_eff|, rad/s
    double gamma_eff = 0.0;  // effective damping there, rad/s
    bool stable = true;      // gamma_eff > 0
};

// Locates the effective resonance by grid argmax of |chi_eff| plus a
// three-point quadratic refinement, then reads the effective damping off
// the oscillator reduction at that point. The grid must span at least
// [Omega_M - 50 Gamma, Omega_M + 50 Gamma] with steps no larger than
// Gamma/10 and must bracket the peak.
EffectiveModeParams effective_mode_params(const MechanicalParams& mech,
                                          const OpticalParams& optical,
                                          const DriveState& drive,
                                          const std::vector<double>& grid);

// Search grid satisfying the effective_mode_params contract, widened and
// refined according to the predicted optical spring shift and damping.
std::vector<double> make_mode_search_grid(const MechanicalParams& mech,
                                          const OpticalParams& optical,
                                          const DriveState& drive);

}  // namespace omsim

#endif
