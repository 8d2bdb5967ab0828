#ifndef OMSIM_NOISE_HPP
#define OMSIM_NOISE_HPP

#include <functional>
#include <vector>

#include "omsim/params.hpp"
#include "omsim/response.hpp"
#include "omsim/spectrum.hpp"

namespace omsim {

// Narrowband quantum noise decomposition at one frequency, all spectral
// densities one-sided in m^2/Hz. total = shot + backaction, and
// total = sql * (1/zeta + zeta) / 2 with zeta = 2 hbar xi^2 |chi_eff|,
// so total touches the standard quantum limit exactly at zeta = 1.
struct QuantumNoiseBudget {
    double shot = 0.0;        // 1 / (4 xi^2)
    double backaction = 0.0;  // hbar^2 xi^2 |chi_eff|^2
    double total = 0.0;
    double zeta = 0.0;
    double sql = 0.0;         // hbar |chi_eff|
};

// Finite-cavity-bandwidth correction factors. u -> 1 and v -> 0 as
// Omega tau -> 0; both depend on optical parameters only.
struct FiniteBandwidthFactors {
    Complex u;
    Complex v;
};

double optomechanical_parameter(const MechanicalParams& mech,
                                const OpticalParams& optical,
                                const DriveState& drive, double omega,
                                bool finite_bandwidth);

QuantumNoiseBudget noise_budget_narrowband(const MechanicalParams& mech,
                                           const OpticalParams& optical,
                                           const DriveState& drive,
                                           double omega);

double quantum_noise_narrowband(const MechanicalParams& mech,
                                const OpticalParams& optical,
                                const DriveState& drive, double omega);

FiniteBandwidthFactors finite_bandwidth_factors(const OpticalParams& optical,
                                                double detuning, double omega);

// Quantum noise with cavity-bandwidth corrections folded in:
// hbar |chi_eff| [ (1/zeta + zeta)/2 + |v|^2 zeta/2 + Im(v* chi_eff/|chi_eff|) ]
// with zeta = 2 hbar xi^2 |chi_eff| / |u|^2.
double quantum_noise_finite_bandwidth(const MechanicalParams& mech,
                                      const OpticalParams& optical,
                                      const DriveState& drive, double omega);

// Standard quantum limits, m^2/Hz.
double sql_effective(const MechanicalParams& mech, const OpticalParams& optical,
                     const DriveState& drive, double omega);
double sql_bare(const MechanicalParams& mech, double omega);

enum class SqlReference { effective, bare };

// Equivalent signal noise spectrum at unit signal-to-noise ratio: the
// quantum noise divided by the back-action amplification factor when the
// amplified flag is set.
struct SensitivityCurve {
    SpectrumTrace trace;
    bool amplified = false;
    bool finite_bandwidth = false;
};

SensitivityCurve sensitivity_curve(const MechanicalParams& mech,
                                   const OpticalParams& optical,
                                   const DriveState& drive,
                                   const std::vector<double>& grid,
                                   bool amplified, bool finite_bandwidth);

// 10 log10(reference / curve) at a grid frequency; positive means the
// curve beats the chosen standard quantum limit.
double improvement_db(const MechanicalParams& mech,
                      const OpticalParams& optical, const DriveState& drive,
                      const SensitivityCurve& curve, SqlReference reference,
                      double omega);

struct PowerSearchResult {
    double power_w = 0.0;
    double objective = 0.0;
};

// Logarithmic grid search over input power followed by golden-section
// refinement; stops once the bracketed objective spread falls below 1%.
PowerSearchResult maximize_over_power(
    const std::function<double(double)>& objective, double power_min_w,
    double power_max_w, int grid_points = 200);

}  // namespace omsim

#endif
