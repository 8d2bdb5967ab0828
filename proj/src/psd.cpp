#include "omsim/psd.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "omsim/errors.hpp"
#include "omsim/fft.hpp"

namespace omsim {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

// Box-Muller on top of mt19937_64: deterministic across platforms,
// unlike std::normal_distribution whose algorithm is unspecified.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // in (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    double uniform() {
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1)
    }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

std::vector<double> synthesize_timeseries(const PsdModel& model,
                                          double duration_s,
                                          double sample_rate_hz,
                                          std::uint64_t seed) {
    if (!model.psd) throw parameter_error("PSD model has no evaluator");
    if (!(sample_rate_hz > 0.0) || !(duration_s > 0.0))
        throw parameter_error("duration and sample rate must be positive");
    if (model.peak_rad_s > 0.0 &&
        sample_rate_hz <= 4.0 * model.peak_rad_s / (2.0 * std::numbers::pi))
        throw parameter_error(
            "undersampled: sample rate must exceed four times the model's "
            "peak frequency");
    if (model.linewidth_rad_s > 0.0 &&
        duration_s < 100.0 / (2.0 * std::numbers::pi * model.linewidth_rad_s))
        throw parameter_error(
            "duration too short to resolve the model linewidth");

    const auto n = static_cast<std::size_t>(
        std::llround(duration_s * sample_rate_hz));
    if (n < 8) throw parameter_error("duration covers too few samples");

    // E|X_k|^2 = S(f_k) fs n / 2 makes the rectangular periodogram of the
    // inverse transform an unbiased estimate of the model.
    GaussianStream gauss(seed);
    std::vector<std::complex<double>> spectrum(n / 2 + 1,
                                               std::complex<double>(0.0, 0.0));
    const double domega = 2.0 * std::numbers::pi * sample_rate_hz /
                          static_cast<double>(n);
    const double half_power = sample_rate_hz * static_cast<double>(n) / 4.0;
    for (std::size_t k = 1; k < (n + 1) / 2; ++k) {
        const double s = model.psd(domega * static_cast<double>(k));
        if (!(s >= 0.0))
            throw parameter_error("PSD model returned a negative value");
        const double sigma = std::sqrt(s * half_power);
        spectrum[k] = std::complex<double>(sigma * gauss.next(),
                                           sigma * gauss.next());
    }
    if (n % 2 == 0) {
        const double s = model.psd(domega * static_cast<double>(n / 2));
        if (!(s >= 0.0))
            throw parameter_error("PSD model returned a negative value");
        spectrum[n / 2] =
            std::complex<double>(std::sqrt(2.0 * s * half_power) * gauss.next(),
                                 0.0);
    }
    return inverse_hermitian_fft(spectrum, n);
}

SpectrumTrace welch_psd(std::span<const double> samples,
                        double sample_rate_hz, std::size_t segment_length,
                        double overlap) {
    if (samples.empty()) throw parameter_error("empty input series");
    if (!(sample_rate_hz > 0.0))
        throw parameter_error("sample rate must be positive");
    if (segment_length < 8 || segment_length > samples.size())
        throw parameter_error(
            "segment length must be in [8, n_samples]");
    if (!(overlap >= 0.0 && overlap <= 0.9))
        throw parameter_error("overlap must lie in [0, 0.9]");

    const std::size_t len = segment_length;
    const auto hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::llround(static_cast<double>(len) * (1.0 - overlap))));
    const std::size_t n_segments = (samples.size() - len) / hop + 1;

    std::vector<double> window(len);
    double window_power = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                          static_cast<double>(i) /
                                          static_cast<double>(len)));
        window_power += window[i] * window[i];
    }

    RealForwardFft fft(len);
    std::vector<double> buffer(len);
    std::vector<std::complex<double>> spectrum;
    std::vector<double> acc(len / 2 + 1, 0.0);
    for (std::size_t s = 0; s < n_segments; ++s) {
        const double* seg = samples.data() + s * hop;
        for (std::size_t i = 0; i < len; ++i) buffer[i] = seg[i] * window[i];
        fft.transform(buffer, spectrum);
        for (std::size_t k = 0; k < acc.size(); ++k)
            acc[k] += std::norm(spectrum[k]);
    }

    SpectrumTrace trace;
    trace.unit = TraceUnit::m2_per_hz;
    trace.omega.resize(acc.size());
    trace.value.resize(acc.size());
    const double scale = 2.0 / (sample_rate_hz * window_power *
                                static_cast<double>(n_segments));
    const double domega =
        2.0 * std::numbers::pi * sample_rate_hz / static_cast<double>(len);
    for (std::size_t k = 0; k < acc.size(); ++k) {
        trace.omega[k] = domega * static_cast<double>(k);
        double v = acc[k] * scale;
        if (k == 0 || (len % 2 == 0 && k == len / 2)) v *= 0.5;
        trace.value[k] = v;
    }
    return trace;
}

}  // namespace omsim
