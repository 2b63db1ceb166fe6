#include "fft.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>

namespace crossimpact::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::size_t fft_size(std::size_t n) {
    if (n <= 1) return 1;
    std::size_t best = 1;
    while (best < n) best *= 2;
    for (std::size_t p5 = 1; p5 < best; p5 *= 5) {
        for (std::size_t p35 = p5; p35 < best; p35 *= 3) {
            std::size_t v = p35;
            while (v < n) v *= 2;
            best = std::min(best, v);
        }
    }
    return best;
}

RealFft::RealFft(std::size_t n) : n_(n) {
    FftwArray<double> real(n);
    FftwArray<fftw_complex> spec(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(n);
    fwd_ = fftw_plan_dft_r2c_1d(len, real.data(), spec.data(), FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(len, spec.data(), real.data(), FFTW_ESTIMATE);
    if (!fwd_ || !inv_) throw std::runtime_error("FFT planning failed");
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (inv_) fftw_destroy_plan(inv_);
}

void RealFft::forward(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(fwd_, in, out); }

void RealFft::inverse(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(inv_, in, out); }

const RealFft& FftPlans::get(std::size_t n) {
    auto& slot = plans_[n];
    if (!slot) slot = std::make_unique<RealFft>(n);
    return *slot;
}

std::vector<double> cross_correlate(const RealFft& fft, const std::vector<double>& a, const std::vector<double>& b,
                                    std::size_t max_lag) {
    const std::size_t N = fft.size();
    FftwArray<double> ra(N), rb(N);
    FftwArray<fftw_complex> sa(fft.bins()), sb(fft.bins());
    std::fill_n(ra.data(), N, 0.0);
    std::fill_n(rb.data(), N, 0.0);
    std::copy(a.begin(), a.end(), ra.data());
    std::copy(b.begin(), b.end(), rb.data());
    fft.forward(ra.data(), sa.data());
    fft.forward(rb.data(), sb.data());
    for (std::size_t k = 0; k < fft.bins(); ++k) {
        // conj(A) * B
        const double re = sa[k][0] * sb[k][0] + sa[k][1] * sb[k][1];
        const double im = sa[k][0] * sb[k][1] - sa[k][1] * sb[k][0];
        sa[k][0] = re;
        sa[k][1] = im;
    }
    fft.inverse(sa.data(), ra.data());
    std::vector<double> out(max_lag + 1);
    const double scale = 1.0 / static_cast<double>(N);
    for (std::size_t k = 0; k <= max_lag; ++k) out[k] = ra[k] * scale;
    return out;
}

std::vector<double> causal_convolve(const RealFft& fft, const std::vector<double>& kernel, const std::vector<double>& x) {
    const std::size_t N = fft.size();
    const std::size_t n = x.size();
    FftwArray<double> rk(N), rx(N);
    FftwArray<fftw_complex> sk(fft.bins()), sx(fft.bins());
    std::fill_n(rk.data(), N, 0.0);
    std::fill_n(rx.data(), N, 0.0);
    for (std::size_t k = 1; k < std::min(kernel.size(), n); ++k) rk[k] = kernel[k];
    std::copy(x.begin(), x.end(), rx.data());
    fft.forward(rk.data(), sk.data());
    fft.forward(rx.data(), sx.data());
    for (std::size_t k = 0; k < fft.bins(); ++k) {
        const double re = sk[k][0] * sx[k][0] - sk[k][1] * sx[k][1];
        const double im = sk[k][0] * sx[k][1] + sk[k][1] * sx[k][0];
        sk[k][0] = re;
        sk[k][1] = im;
    }
    fft.inverse(sk.data(), rk.data());
    std::vector<double> y(n);
    const double scale = 1.0 / static_cast<double>(N);
    for (std::size_t t = 0; t < n; ++t) y[t] = rk[t] * scale;
    return y;
}

}  // namespace crossimpact::detail
