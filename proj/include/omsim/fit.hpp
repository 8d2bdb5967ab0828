#ifndef OMSIM_FIT_HPP
#define OMSIM_FIT_HPP

#include "omsim/spectrum.hpp"

namespace omsim {

struct LorentzianGuess {
    double center_rad_s = 0.0;
    double width_rad_s = 0.0;   // full width at half maximum
    double amplitude = 0.0;     // peak height above baseline
    double baseline = 0.0;
};

struct FitResult {
    double center_rad_s = 0.0;
    double width_rad_s = 0.0;
    double amplitude = 0.0;
    double baseline = 0.0;
    double residual_norm = 0.0;  // rms residual relative to the data scale
    bool converged = false;
    int iterations = 0;
};

// Damped Gauss-Newton least squares of
//   amplitude (w/2)^2 / ((x - center)^2 + (w/2)^2) + baseline
// with analytic Jacobian, run on an internally rescaled problem.
// Convergence once the relative step drops below 1e-9 or the gradient
// norm below 1e-12; gives up after 200 iterations with the best iterate.
// A trace without a resolvable peak comes back with converged = false.
FitResult fit_lorentzian(const SpectrumTrace& trace,
                         const LorentzianGuess& guess);

// Peak-bin initial guess: center at the maximum, width from the
// half-height crossings, baseline from the low quantile.
LorentzianGuess guess_from_peak(const SpectrumTrace& trace);

}  // namespace omsim

#endif
