#pragma once

#include <complex>
#include <vector>

namespace hali {

/// Real-to-complex forward FFT of a fixed size, backed by FFTW.
/// Plans are created once per instance; execution is deterministic.
/// Not thread-safe (shared in/out buffers); use one instance per thread.
class RealFft {
public:
    explicit RealFft(int n);
    ~RealFft();

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    int size() const { return n_; }

    /// Input buffer of length size(); zero it and fill before forward().
    double* input() { return in_; }

    /// Transforms input() and returns the n/2+1 one-sided coefficients
    /// Sum_m x(m) e^{-2*pi*i*j*m/n} (no normalization).
    const std::complex<double>* forward();

private:
    int n_;
    double* in_;
    void* out_;   // fftw_complex*
    void* plan_;  // fftw_plan
};

/// Complex in-place FFT helpers used by the analytic-signal phase estimate.
std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& x);
std::vector<std::complex<double>> fft_inverse(const std::vector<std::complex<double>>& x);

}  // namespace hali
