#include "omsim/noise.hpp"

#include <cmath>
#include <cstddef>

#include "omsim/constants.hpp"
#include "omsim/errors.hpp"

namespace omsim {

namespace {

void require_power(const DriveState& drive) {
    if (!(drive.phase_gain > 0.0))
        throw zero_power_error(
            "quantum noise is undefined at zero drive power (xi = 0)");
}

}  // namespace

double optomechanical_parameter(const MechanicalParams& mech,
                                const OpticalParams& optical,
                                const DriveState& drive, double omega,
                                bool finite_bandwidth) {
    require_power(drive);
    const double xi = drive.phase_gain;
    const double chi_eff_mag =
        std::abs(effective_susceptibility(mech, optical, drive, omega));
    double zeta = 2.0 * kConst.hbar * xi * xi * chi_eff_mag;
    if (finite_bandwidth) {
        const auto fb = finite_bandwidth_factors(optical, drive.detuning, omega);
        zeta /= std::norm(fb.u);
    }
    return zeta;
}

QuantumNoiseBudget noise_budget_narrowband(const MechanicalParams& mech,
                                           const OpticalParams& optical,
                                           const DriveState& drive,
                                           double omega) {
    require_power(drive);
    const double xi = drive.phase_gain;
    const double chi_eff_mag =
        std::abs(effective_susceptibility(mech, optical, drive, omega));

    QuantumNoiseBudget b;
    b.shot = 1.0 / (4.0 * xi * xi);
    b.backaction = kConst.hbar * kConst.hbar * xi * xi * chi_eff_mag * chi_eff_mag;
    b.total = b.shot + b.backaction;
    b.zeta = 2.0 * kConst.hbar * xi * xi * chi_eff_mag;
    b.sql = kConst.hbar * chi_eff_mag;
    return b;
}

double quantum_noise_narrowband(const MechanicalParams& mech,
                                const OpticalParams& optical,
                                const DriveState& drive, double omega) {
    return noise_budget_narrowband(mech, optical, drive, omega).total;
}

FiniteBandwidthFactors finite_bandwidth_factors(const OpticalParams& optical,
                                                double detuning, double omega) {
    const Complex delta = cavity_denominator(optical, detuning, omega);
    const Complex u =
        delta / Complex(optical.gamma * optical.gamma + detuning * detuning,
                        -optical.gamma * omega * optical.roundtrip_s);
    const Complex v = (omega / optical.bandwidth_rad_s) *
                      (optical.gamma * detuning / delta) * u;
    return {u, v};
}

double quantum_noise_finite_bandwidth(const MechanicalParams& mech,
                                      const OpticalParams& optical,
                                      const DriveState& drive, double omega) {
    require_power(drive);
    const double xi = drive.phase_gain;
    const Complex chi_eff =
        effective_susceptibility(mech, optical, drive, omega);
    const double mag = std::abs(chi_eff);
    const auto fb = finite_bandwidth_factors(optical, drive.detuning, omega);

    const double zeta = 2.0 * kConst.hbar * xi * xi * mag / std::norm(fb.u);
    const double bracket = 0.5 * (1.0 / zeta + zeta) +
                           0.5 * std::norm(fb.v) * zeta +
                           std::imag(std::conj(fb.v) * (chi_eff / mag));
    if (!(bracket > 0.0))
        throw simulation_error(
            "finite-bandwidth noise bracket went non-positive; quadrature "
            "phase convention is broken");
    return kConst.hbar * mag * bracket;
}

double sql_effective(const MechanicalParams& mech, const OpticalParams& optical,
                     const DriveState& drive, double omega) {
    return kConst.hbar *
           std::abs(effective_susceptibility(mech, optical, drive, omega));
}

double sql_bare(const MechanicalParams& mech, double omega) {
    return kConst.hbar * std::abs(mechanical_susceptibility(mech, omega));
}

SensitivityCurve sensitivity_curve(const MechanicalParams& mech,
                                   const OpticalParams& optical,
                                   const DriveState& drive,
                                   const std::vector<double>& grid,
                                   bool amplified, bool finite_bandwidth) {
    validate_grid(grid);
    SensitivityCurve curve;
    curve.amplified = amplified;
    curve.finite_bandwidth = finite_bandwidth;
    curve.trace.unit = TraceUnit::m2_per_hz;
    curve.trace.omega = grid;
    curve.trace.value.reserve(grid.size());
    for (const double omega : grid) {
        double noise = finite_bandwidth
                           ? quantum_noise_finite_bandwidth(mech, optical,
                                                            drive, omega)
                           : quantum_noise_narrowband(mech, optical, drive,
                                                      omega);
        if (amplified)
            noise /= amplification_factor(mech, optical, drive, omega);
        if (!(noise > 0.0))
            throw simulation_error("sensitivity samples must stay positive");
        curve.trace.value.push_back(noise);
    }
    return curve;
}

double improvement_db(const MechanicalParams& mech,
                      const OpticalParams& optical, const DriveState& drive,
                      const SensitivityCurve& curve, SqlReference reference,
                      double omega) {
    const auto& grid = curve.trace.omega;
    std::size_t idx = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid[i] - omega) <= 1e-9 * std::abs(omega)) {
            idx = i;
            break;
        }
    }
    if (idx == grid.size())
        throw grid_error("frequency is not a point of the sensitivity grid");
    const double ref = reference == SqlReference::effective
                           ? sql_effective(mech, optical, drive, omega)
                           : sql_bare(mech, omega);
    return 10.0 * std::log10(ref / curve.trace.value[idx]);
}

PowerSearchResult maximize_over_power(
    const std::function<double(double)>& objective, double power_min_w,
    double power_max_w, int grid_points) {
    if (!(power_min_w > 0.0) || !(power_max_w > power_min_w))
        throw parameter_error("power search range must satisfy 0 < min < max");
    if (grid_points < 3)
        throw parameter_error("power search needs at least three grid points");

    const double log_lo = std::log(power_min_w);
    const double log_hi = std::log(power_max_w);
    const double step = (log_hi - log_lo) / (grid_points - 1);

    int best = 0;
    double best_val = objective(power_min_w);
    for (int i = 1; i < grid_points; ++i) {
        const double val = objective(std::exp(log_lo + step * i));
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }

    // Golden-section refinement inside the bracketing interval.
    double a = log_lo + step * std::max(0, best - 1);
    double b = log_lo + step * std::min(grid_points - 1, best + 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = objective(std::exp(x1));
    double f2 = objective(std::exp(x2));
    for (int it = 0; it < 100; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(std::exp(x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(std::exp(x1));
        }
        const double hi = std::max(f1, f2);
        const double lo = std::min(f1, f2);
        if (std::abs(hi - lo) <= 0.01 * std::abs(hi)) break;
    }

    PowerSearchResult out;
    if (f1 > best_val) {
        best_val = f1;
        out.power_w = std::exp(x1);
    } else if (f2 > best_val) {
        best_val = f2;
        out.power_w = std::exp(x2);
    } else {
        out.power_w = std::exp(log_lo + step * best);
    }
    out.objective = best_val;
    return out;
}

}  // namespace omsim
