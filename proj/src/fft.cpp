#include "omsim/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "omsim/errors.hpp"

namespace omsim {

namespace {

// The FFTW planner is not thread-safe; plan creation and destruction go
// through this lock. fftw_execute on distinct plans needs no locking.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

RealForwardFft::RealForwardFft(std::size_t n) : n_(n) {
    if (n < 2) throw parameter_error("FFT size must be at least 2");
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_,
                                 static_cast<fftw_complex*>(out_),
                                 FFTW_ESTIMATE);
}

RealForwardFft::~RealForwardFft() {
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
    fftw_free(in_);
    fftw_free(out_);
}

void RealForwardFft::transform(std::span<const double> x,
                               std::vector<std::complex<double>>& out) {
    if (x.size() != n_)
        throw parameter_error("FFT input length does not match the plan");
    std::memcpy(in_, x.data(), n_ * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(plan_));
    out.resize(n_ / 2 + 1);
    std::memcpy(out.data(), out_, (n_ / 2 + 1) * sizeof(fftw_complex));
}

std::vector<double> inverse_hermitian_fft(
    std::span<const std::complex<double>> half_spectrum, std::size_t n) {
    if (half_spectrum.size() != n / 2 + 1)
        throw parameter_error("half spectrum length must be n/2 + 1");
    fftw_complex* in = fftw_alloc_complex(n / 2 + 1);
    double* out = fftw_alloc_real(n);
    std::memcpy(in, half_spectrum.data(), (n / 2 + 1) * sizeof(fftw_complex));

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    std::vector<double> samples(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = out[i] * scale;
    fftw_free(in);
    fftw_free(out);
    return samples;
}

}  // namespace omsim
