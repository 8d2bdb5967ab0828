#ifndef OMSIM_FFT_HPP
#define OMSIM_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace omsim {

// Real-to-complex FFT of fixed size, reusable across many segments.
// FFTW planner calls are serialized internally; execution is safe from
// concurrent instances.
class RealForwardFft {
  public:
    explicit RealForwardFft(std::size_t n);
    ~RealForwardFft();
    RealForwardFft(const RealForwardFft&) = delete;
    RealForwardFft& operator=(const RealForwardFft&) = delete;

    std::size_t size() const { return n_; }

    // x.size() must equal size(); out is resized to size()/2 + 1.
    void transform(std::span<const double> x,
                   std::vector<std::complex<double>>& out);

  private:
    std::size_t n_ = 0;
    void* plan_ = nullptr;
    double* in_ = nullptr;
    void* out_ = nullptr;
};

// Inverse transform of a Hermitian half-spectrum (size n/2 + 1) into n
// real samples, normalized by 1/n.
std::vector<double> inverse_hermitian_fft(
    std::span<const std::complex<double>> half_spectrum, std::size_t n);

}  // namespace omsim

#endif
