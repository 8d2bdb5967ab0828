#include "omsim/response.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "omsim/constants.hpp"
#include "omsim/errors.hpp"

namespace omsim {

Complex susceptibility_inverse(const MechanicalParams& mech, double omega) {
    const double wm = mech.resonance_rad_s;
    return mech.mass_kg *
           Complex(wm * wm - omega * omega, -wm * omega / mech.quality);
}

Complex mechanical_susceptibility(const MechanicalParams& mech, double omega) {
    return 1.0 / susceptibility_inverse(mech, omega);
}

Complex backaction_coefficient(const OpticalParams& optical,
                               const DriveState& drive, double omega) {
    if (drive.intracavity_flux == 0.0 || drive.detuning == 0.0)
        return Complex(0.0, 0.0);
    const double scale = 8.0 * kConst.hbar * optical.wavevector *
                         optical.wavevector * drive.intracavity_flux *
                         drive.detuning;
    return scale / cavity_denominator(optical, drive.detuning, omega);
}

Complex effective_susceptibility_inverse(const MechanicalParams& mech,
                                         const OpticalParams& optical,
                                         const DriveState& drive,
                                         double omega) {
    return susceptibility_inverse(mech, omega) +
           backaction_coefficient(optical, drive, omega);
}

Complex effective_susceptibility(const MechanicalParams& mech,
                                 const OpticalParams& optical,
                                 const DriveState& drive, double omega) {
    const Complex k_opt = backaction_coefficient(optical, drive, omega);
    if (k_opt == Complex(0.0, 0.0))
        return mechanical_susceptibility(mech, omega);
    const Complex chi_inv = susceptibility_inverse(mech, omega);
    const Complex inv = chi_inv + k_opt;
    if (std::abs(inv) < 1e-12 * (std::abs(chi_inv) + std::abs(k_opt)))
        throw singular_inverse_error(
            "chi_eff^-1 cancelled to numerical zero; configuration sits on "
            "the parametric instability boundary");
    return 1.0 / inv;
}

double amplification_factor(const MechanicalParams& mech,
                            const OpticalParams& optical,
                            const DriveState& drive, double omega) {
    const Complex k_opt = backaction_coefficient(optical, drive, omega);
    if (k_opt == Complex(0.0, 0.0)) return 1.0;
    const Complex chi_inv = susceptibility_inverse(mech, omega);
    const Complex inv = chi_inv + k_opt;
    if (std::abs(inv) < 1e-12 * (std::abs(chi_inv) + std::abs(k_opt)))
        throw singular_inverse_error(
            "chi_eff^-1 cancelled to numerical zero; configuration sits on "
            "the parametric instability boundary");
    return std::norm(chi_inv) / std::norm(inv);
}

double local_effective_damping(const MechanicalParams& mech,
                               const OpticalParams& optical,
                               const DriveState& drive, double omega) {
    const Complex inv =
        effective_susceptibility_inverse(mech, optical, drive, omega);
    return -inv.imag() / (mech.mass_kg * omega);
}

namespace {

// Vertex of the parabola through three points; used on 1/|chi_eff|^2,
// which is nearly quadratic across the resonance peak.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2,
                       double y2) {
    const double d = (x0 - x1) * (x0 - x2) * (x1 - x2);
    const double a =
        (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / d;
    if (!(a > 0.0))
        throw grid_error("grid too coarse: no curvature around the peak");
    const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) +
                      x0 * x0 * (y1 - y2)) /
                     d;
    return -b / (2.0 * a);
}

}  // namespace

EffectiveModeParams effective_mode_params(const MechanicalParams& mech,
                                          const OpticalParams& optical,
                                          const DriveState& drive,
                                          const std::vector<double>& grid) {
    const double wm = mech.resonance_rad_s;
    const double gm = mech.damping_rad_s;
    if (grid.size() < 3)
        throw grid_error("mode search grid needs at least three points");
    if (grid.front() > wm - 50.0 * gm || grid.back() < wm + 50.0 * gm)
        throw grid_error(
            "mode search grid must span [Omega_M - 50 Gamma, Omega_M + 50 Gamma]");

    std::size_t best = 0;
    double best_val = -1.0;
    double prev = grid.front();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0) {
            const double step = grid[i] - prev;
            if (!(step > 0.0))
                throw grid_error("mode search grid must be strictly increasing");
            if (step > gm / 10.0 * (1.0 + 1e-9))
                throw grid_error("mode search grid step must not exceed Gamma/10");
            prev = grid[i];
        }
        const double r = std::norm(
            effective_susceptibility_inverse(mech, optical, drive, grid[i]));
        const double val = 1.0 / r;
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    if (best == 0 || best + 1 == grid.size())
        throw grid_error("grid too coarse: susceptibility peak not bracketed");

    const auto inv_norm = [&](double w) {
        return std::norm(effective_susceptibility_inverse(mech, optical, drive, w));
    };
    double omega_eff = parabola_vertex(
        grid[best - 1], inv_norm(grid[best - 1]), grid[best],
        inv_norm(grid[best]), grid[best + 1], inv_norm(grid[best + 1]));
    omega_eff = std::clamp(omega_eff, grid[best - 1], grid[best + 1]);

    EffectiveModeParams out;
    out.omega_eff = omega_eff;
    out.gamma_eff = local_effective_damping(mech, optical, drive, omega_eff);
    out.stable = out.gamma_eff > 0.0;
    return out;
}

std::vector<double> make_mode_search_grid(const MechanicalParams& mech,
                                          const OpticalParams& optical,
                                          const DriveState& drive) {
    const double wm = mech.resonance_rad_s;
    const double gm = mech.damping_rad_s;

    // Predict the spring shift and damping from the oscillator reduction
    // at Omega_M, then widen the mandated span to keep the shifted peak
    // well inside the grid.
    const Complex k_opt = backaction_coefficient(optical, drive, wm);
    const double shift = k_opt.real() / (2.0 * mech.mass_kg * wm);
    const double damping_pred =
        gm - k_opt.imag() / (mech.mass_kg * wm);
    const double halfwidth =
        50.0 * std::max(gm, std::abs(damping_pred)) + 2.0 * std::abs(shift);

    const double lo = std::min(wm, wm + shift) - halfwidth;
    const double hi = std::max(wm, wm + shift) + halfwidth;
    const double width_scale =
        std::max(std::min(gm, std::abs(damping_pred)), gm / 10.0);
    const double step = std::min(gm / 10.0, width_scale / 10.0) / 2.0;

    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
    std::vector<double> grid(n);
    const double actual_step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = lo + actual_step * static_cast<double>(i);
    return grid;
}

}  // namespace omsim
