#include "omsim/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "omsim/constants.hpp"
#include "omsim/csv.hpp"
#include "omsim/errors.hpp"
#include "omsim/psd.hpp"

namespace omsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Pause per instrument reconfiguration between protocol steps.
constexpr double kReconfigureS = 60.0;

// Spectrum-analyzer zoom band: the displacement signal is demodulated
// into a narrow band around the mechanical resonance and synthesized at
// baseband, which keeps hour-long acquisitions tractable. The resonance
// is placed at a fifth of the zoom rate.
constexpr double kZoomRateHz = 2048.0;
constexpr double kZoomPeakFraction = 0.2;
constexpr std::size_t kDetunedSegment = 8192;   // 0.25 Hz bins
constexpr std::size_t kBareSegment = 32768;     // 0.0625 Hz bins
constexpr double kOverlap = 0.75;
constexpr double kFitWindowWidths = 30.0;

SpectrumTrace acquire_thermal_zoom(const MechanicalParams& mech,
                                   const OpticalParams& optical,
                                   const DriveState& drive,
                                   const BathParams& bath, double peak_rad_s,
                                   double linewidth_rad_s, double duration_s,
                                   std::size_t segment_length,
                                   std::uint64_t seed) {
    const double omega0 = peak_rad_s - kTwoPi * kZoomPeakFraction * kZoomRateHz;
    PsdModel model;
    model.psd = [&mech, &optical, &drive, &bath, omega0](double omega_bb) {
        return thermal_displacement_psd(mech, optical, drive, bath,
                                        omega0 + omega_bb);
    };
    model.peak_rad_s = peak_rad_s - omega0;
    model.linewidth_rad_s = linewidth_rad_s;

    const auto samples =
        synthesize_timeseries(model, duration_s, kZoomRateHz, seed);
    SpectrumTrace trace =
        welch_psd(samples, kZoomRateHz, segment_length, kOverlap);
    for (auto& w : trace.omega) w += omega0;
    return trace;
}

SpectrumTrace window_around(const SpectrumTrace& trace, double center,
                            double halfwidth) {
    SpectrumTrace out;
    out.unit = trace.unit;
    for (std::size_t i = 0; i < trace.omega.size(); ++i) {
        if (trace.omega[i] >= center - halfwidth &&
            trace.omega[i] <= center + halfwidth) {
            out.omega.push_back(trace.omega[i]);
            out.value.push_back(trace.value[i]);
        }
    }
    if (out.omega.size() < 16)
        throw grid_error("fit window contains too few spectrum bins");
    return out;
}

}  // namespace

BathParams derive_bath_params(double temperature_k) {
    if (!(temperature_k > 0.0))
        throw parameter_error("bath temperature must be positive");
    return BathParams{temperature_k};
}

double thermal_displacement_psd(const MechanicalParams& mech,
                                const OpticalParams& optical,
                                const DriveState& drive,
                                const BathParams& bath, double omega) {
    if (!(omega > 0.0))
        throw parameter_error(
            "thermal spectrum is defined for positive frequencies");
    if (!(local_effective_damping(mech, optical, drive, omega) > 0.0))
        throw instability_error(
            "thermal spectrum undefined: optical anti-damping exceeds the "
            "intrinsic damping");
    return 4.0 * kConst.kb * bath.temperature_k / omega *
           std::imag(effective_susceptibility(mech, optical, drive, omega));
}

SpectrumTrace swept_sine_response(const MechanicalParams& mech,
                                  const OpticalParams& optical,
                                  const DriveState& drive,
                                  const BathParams& bath,
                                  const std::vector<double>& grid,
                                  double signal_level_db) {
    validate_grid(grid);
    const double wm = mech.resonance_rad_s;
    if (grid.front() > wm - kTwoPi * 500.0 || grid.back() < wm + kTwoPi * 1500.0)
        throw grid_error(
            "sweep grid must cover at least [f_M - 500 Hz, f_M + 1500 Hz]");

    const double thermal_at_resonance =
        thermal_displacement_psd(mech, optical, drive, bath, wm);
    const double signal_level =
        thermal_at_resonance * std::pow(10.0, signal_level_db / 10.0);

    SpectrumTrace trace;
    trace.unit = TraceUnit::dimensionless;
    trace.omega = grid;
    trace.value.reserve(grid.size());
    // Displayed trace: coherently averaged drive response on top of the
    // incoherent thermal floor. The analyzer gain is fixed by requiring
    // the displayed floor to sit signal_level_db below the drive at the
    // mechanical resonance, which makes it unity here.
    for (const double omega : grid) {
        const double value =
            amplification_factor(mech, optical, drive, omega) * signal_level +
            thermal_displacement_psd(mech, optical, drive, bath, omega);
        trace.value.push_back(value);
    }

    const double reference = interpolate(trace, wm + kTwoPi * 1000.0);
    for (auto& v : trace.value) v /= reference;
    return trace;
}

ExperimentRecord run_protocol(const ProtocolConfig& config,
                              std::uint64_t seed) {
    const auto& mech = config.mech;
    const auto& optical = config.optical;
    const auto& drive = config.drive;
    if (!(config.detuned_acquisition_s > 0.0) ||
        !(config.sweep_duration_s > 0.0) || !(config.bare_acquisition_s > 0.0))
        throw parameter_error("acquisition durations must be positive");

    const EffectiveModeParams predicted = effective_mode_params(
        mech, optical, drive, make_mode_search_grid(mech, optical, drive));
    if (!predicted.stable)
        throw instability_error(
            "protocol aborted: drive configuration is dynamically unstable");

    std::uint64_t stream = seed;
    const std::uint64_t seed_detuned = splitmix64(stream);
    const std::uint64_t seed_bare = splitmix64(stream);

    ExperimentRecord record;
    record.seed = seed;
    record.detuned_acquisition_s = config.detuned_acquisition_s;
    record.sweep_duration_s = config.sweep_duration_s;
    record.bare_acquisition_s = config.bare_acquisition_s;

    // Step 1: thermal noise of the detuned probe -> effective mode.
    record.thermal_psd_detuned = acquire_thermal_zoom(
        mech, optical, drive, config.bath, predicted.omega_eff,
        predicted.gamma_eff, config.detuned_acquisition_s, kDetunedSegment,
        seed_detuned);
    {
        const SpectrumTrace window =
            window_around(record.thermal_psd_detuned, predicted.omega_eff,
                          kFitWindowWidths * predicted.gamma_eff);
        record.fit_detuned = fit_lorentzian(window, guess_from_peak(window));
        record.fitted_eff.omega_eff = record.fit_detuned.center_rad_s;
        record.fitted_eff.gamma_eff = record.fit_detuned.width_rad_s;
        record.fitted_eff.stable = true;
    }

    // Step 2: swept cavity-length modulation.
    record.swept_response =
        swept_sine_response(mech, optical, drive, config.bath,
                            config.sweep_grid, config.signal_level_db);

    // Step 3: probe off, bare mode on the resonant locking beam. The
    // resonance has drifted by then; the drift is evaluated at the start
    // of this acquisition and held during it.
    record.elapsed_at_bare_s = config.detuned_acquisition_s + kReconfigureS +
                               config.sweep_duration_s + kReconfigureS;
    record.total_emulated_s =
        record.elapsed_at_bare_s + config.bare_acquisition_s;
    record.drift_applied_hz =
        config.drift_hz_per_min * record.elapsed_at_bare_s / 60.0;

    const MechanicalParams drifted = derive_mechanical_params(
        mech.resonance_rad_s + kTwoPi * record.drift_applied_hz, mech.mass_kg,
        mech.quality);
    const DriveState probe_off = derive_drive_state(optical, 0.0, 0.0);

    record.thermal_psd_bare = acquire_thermal_zoom(
        drifted, optical, probe_off, config.bath, drifted.resonance_rad_s,
        drifted.damping_rad_s, config.bare_acquisition_s, kBareSegment,
        seed_bare);
    {
        const SpectrumTrace window =
            window_around(record.thermal_psd_bare, drifted.resonance_rad_s,
                          kFitWindowWidths * drifted.damping_rad_s);
        record.fit_bare = fit_lorentzian(window, guess_from_peak(window));
        record.fitted_bare.resonance_rad_s = record.fit_bare.center_rad_s;
        record.fitted_bare.damping_rad_s = record.fit_bare.width_rad_s;
    }
    return record;
}

void write_experiment_record(const ExperimentRecord& record,
                             const std::string& directory) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec)
        throw io_error("cannot create directory " + directory + ": " +
                       ec.message());

    const auto path = [&](const char* name) {
        return (fs::path(directory) / name).string();
    };
    write_csv(path("thermal_detuned.csv"), record.thermal_psd_detuned.omega,
              {{"psd_m2_per_hz", &record.thermal_psd_detuned.value}});
    write_csv(path("swept_response.csv"), record.swept_response.omega,
              {{"normalized_response", &record.swept_response.value}});
    write_csv(path("thermal_bare.csv"), record.thermal_psd_bare.omega,
              {{"psd_m2_per_hz", &record.thermal_psd_bare.value}});

    std::ostringstream out;
    const auto emit = [&out](const char* key, double value) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        out << key << " = " << buf << "\n";
    };
    out << "seed = " << record.seed << "\n";
    emit("drift_applied_hz", record.drift_applied_hz);
    emit("elapsed_at_bare_s", record.elapsed_at_bare_s);
    emit("total_emulated_s", record.total_emulated_s);
    emit("fitted_eff.f_hz", record.fitted_eff.omega_eff / kTwoPi);
    emit("fitted_eff.gamma_rad_s", record.fitted_eff.gamma_eff);
    emit("fitted_bare.f_hz", record.fitted_bare.resonance_rad_s / kTwoPi);
    emit("fitted_bare.gamma_rad_s", record.fitted_bare.damping_rad_s);
    out << "fit_detuned.converged = " << record.fit_detuned.converged << "\n";
    emit("fit_detuned.residual_norm", record.fit_detuned.residual_norm);
    out << "fit_bare.converged = " << record.fit_bare.converged << "\n";
    emit("fit_bare.residual_norm", record.fit_bare.residual_norm);
    emit("acquisition.detuned_s", record.detuned_acquisition_s);
    emit("acquisition.sweep_s", record.sweep_duration_s);
    emit("acquisition.bare_s", record.bare_acquisition_s);
    emit("reconfigure_s", kReconfigureS);
    write_text_file(path("summary.txt"), out.str());
}

}  // namespace omsim
