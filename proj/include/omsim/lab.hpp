#ifndef OMSIM_LAB_HPP
#define OMSIM_LAB_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "omsim/fit.hpp"
#include "omsim/params.hpp"
#include "omsim/response.hpp"
#include "omsim/spectrum.hpp"

namespace omsim {

struct BathParams {
    double temperature_k = 0.0;
};

BathParams derive_bath_params(double temperature_k);

// One-sided thermal displacement spectrum from the fluctuation-
// dissipation relation, S_x = (4 kB T / Omega) Im chi_eff. Using chi_eff
// means a detuned probe sees the optically cooled/shifted mode; with the
// drive off it reduces to the bare mode exactly.
double thermal_displacement_psd(const MechanicalParams& mech,
                                const OpticalParams& optical,
                                const DriveState& drive,
                                const BathParams& bath, double omega);

// Network-analyzer emulation of the swept cavity-length modulation:
// amplified coherent drive on top of the incoherent thermal floor, with
// the drive set signal_level_db above the thermal spectrum at the
// mechanical resonance. The trace is normalized to its value 1 kHz above
// the resonance, so it directly displays the amplification profile. The
// grid must cover at least [Omega_M - 2 pi 500 Hz, Omega_M + 2 pi 1.5 kHz].
SpectrumTrace swept_sine_response(const MechanicalParams& mech,
                                  const OpticalParams& optical,
                                  const DriveState& drive,
                                  const BathParams& bath,
                                  const std::vector<double>& grid,
                                  double signal_level_db);

struct ProtocolConfig {
    MechanicalParams mech;
    OpticalParams optical;
    DriveState drive;
    BathParams bath;
    std::vector<double> sweep_grid;
    double signal_level_db = 25.0;
    double drift_hz_per_min = 0.1;
    // Emulated acquisition durations. The spectrum analysers average for
    // the full acquisition, so longer values tighten the fitted widths;
    // the defaults start the final acquisition 600 s into the protocol.
    double detuned_acquisition_s = 420.0;
    double sweep_duration_s = 60.0;
    double bare_acquisition_s = 1440.0;
};

struct BareModeFit {
    double resonance_rad_s = 0.0;
    double damping_rad_s = 0.0;

    bool operator==(const BareModeFit&) const = default;
};

// Outputs of the emulated three-step measurement run.
struct ExperimentRecord {
    SpectrumTrace thermal_psd_detuned;
    SpectrumTrace swept_response;
    SpectrumTrace thermal_psd_bare;
    EffectiveModeParams fitted_eff;
    BareModeFit fitted_bare;
    FitResult fit_detuned;
    FitResult fit_bare;
    double drift_applied_hz = 0.0;
    double elapsed_at_bare_s = 0.0;
    double total_emulated_s = 0.0;
    double detuned_acquisition_s = 0.0;
    double sweep_duration_s = 0.0;
    double bare_acquisition_s = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const ExperimentRecord&) const = default;
};

// Emulates the measurement protocol:
//   1. thermal noise of the detuned probe, Welch estimate and Lorentzian
//      fit -> effective mode parameters;
//   2. swept cavity-length modulation, normalized response trace;
//   3. probe off, thermal noise on the resonant locking beam -> bare
//      mode parameters, with the mechanical resonance drifted linearly by
//      drift_hz_per_min times the elapsed protocol time.
// Elapsed time is the sum of the emulated acquisition durations plus a
// fixed reconfiguration pause per step change; the drift is evaluated at
// the start of the final acquisition and held during it. Deterministic:
// identical config and seed reproduce the record bit for bit.
ExperimentRecord run_protocol(const ProtocolConfig& config,
                              std::uint64_t seed);

// Serializes the record to a directory: one CSV per trace plus a
// key-value summary file with the fits, drift, timing, and seed.
void write_experiment_record(const ExperimentRecord& record,
                             const std::string& directory);

}  // namespace omsim

#endif
