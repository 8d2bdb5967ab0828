#ifndef OMSIM_PSD_HPP
#define OMSIM_PSD_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "omsim/spectrum.hpp"

namespace omsim {

// One-sided PSD model for noise synthesis. The hints are used for
// sanity checks only: a nonzero peak_rad_s requires the sample rate to
// exceed four times the peak frequency, and a nonzero linewidth_rad_s
// imposes a minimum duration of 100 / (2 pi linewidth) seconds.
struct PsdModel {
    std::function<double(double omega)> psd;  // m^2/Hz vs rad/s
    double peak_rad_s = 0.0;
    double linewidth_rad_s = 0.0;
};

// Stationary Gaussian series whose one-sided PSD matches the model,
// generated by frequency-domain coloring of white Gaussian noise with a
// Hermitian-symmetric spectrum. Deterministic per seed.
std::vector<double> synthesize_timeseries(const PsdModel& model,
                                          double duration_s,
                                          double sample_rate_hz,
                                          std::uint64_t seed);

// Welch-averaged one-sided PSD with a periodic Hann window, normalized
// so white noise of variance sigma^2 at rate fs comes out flat at
// 2 sigma^2 / fs. overlap is the fractional segment overlap in [0, 0.9].
SpectrumTrace welch_psd(std::span<const double> samples,
                        double sample_rate_hz, std::size_t segment_length,
                        double overlap);

// Deterministic stream splitter for deriving per-step seeds.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace omsim

#endif
