#include "hali/fft.hpp"

#include <fftw3.h>

#include "hali/errors.hpp"

namespace hali {

RealFft::RealFft(int n) : n_(n) {
    if (n < 2) throw InvalidInput("RealFft: transform size must be >= 2");
    in_ = fftw_alloc_real(static_cast<std::size_t>(n));
    out_ = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    plan_ = fftw_plan_dft_r2c_1d(n, in_, static_cast<fftw_complex*>(out_), FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(in_);
    fftw_free(out_);
}

const std::complex<double>* RealFft::forward() {
    fftw_execute(static_cast<fftw_plan>(plan_));
    return reinterpret_cast<const std::complex<double>*>(out_);
}

namespace {

std::vector<std::complex<double>> run_c2c(const std::vector<std::complex<double>>& x, int sign) {
    const int n = static_cast<int>(x.size());
    std::vector<std::complex<double>> out(x.size());
    // FFTW guarantees complex layout compatible with std::complex<double>.
    auto* in_ptr = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(x.data()));
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

}  // namespace

std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& x) {
    return run_c2c(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> fft_inverse(const std::vector<std::complex<double>>& x) {
    auto out = run_c2c(x, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace hali
