#pragma once

// Thin FFTW wrapper shared by the estimators and the generator. Plans are
// created under a lock; executing a plan on caller-owned buffers is safe
// from any thread.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <new>
#include <stdexcept>
#include <vector>

namespace crossimpact::detail {

/// Smallest 2^a 3^b 5^c that is >= n.
std::size_t fft_size(std::size_t n);

template <class T>
class FftwArray {
public:
    explicit FftwArray(std::size_t n) : n_(n), p_(static_cast<T*>(fftw_malloc(sizeof(T) * (n ? n : 1)))) {
        if (!p_) throw std::bad_alloc();
    }
    ~FftwArray() { fftw_free(p_); }
    FftwArray(const FftwArray&) = delete;
    FftwArray& operator=(const FftwArray&) = delete;

    T* data() noexcept { return p_; }
    const T* data() const noexcept { return p_; }
    std::size_t size() const noexcept { return n_; }
    T& operator[](std::size_t k) noexcept { return p_[k]; }
    const T& operator[](std::size_t k) const noexcept { return p_[k]; }

private:
    std::size_t n_;
    T* p_;
};

class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t bins() const noexcept { return n_ / 2 + 1; }

    void forward(double* in, fftw_complex* out) const;   // in is preserved
    void inverse(fftw_complex* in, double* out) const;   // unnormalized; in is clobbered

private:
    std::size_t n_;
    fftw_plan fwd_ = nullptr;
    fftw_plan inv_ = nullptr;
};

/// Plans for every length a batch of work needs, built up front.
class FftPlans {
public:
    const RealFft& get(std::size_t n);  // not thread-safe; call before parallel work
    const RealFft& at(std::size_t n) const { return *plans_.at(n); }

private:
    std::map<std::size_t, std::unique_ptr<RealFft>> plans_;
};

/// Linear cross-correlation c[tau] = sum_t a[t] b[t + tau] for tau in
/// [0, max_lag], both inputs of length n.
std::vector<double> cross_correlate(const RealFft& fft, const std::vector<double>& a, const std::vector<double>& b,
                                    std::size_t max_lag);

/// Causal convolution y[t] = sum_{s < t} k[t - s] x[s], with k[0] unused.
std::vector<double> causal_convolve(const RealFft& fft, const std::vector<double>& kernel, const std::vector<double>& x);

}  // namespace crossimpact::detail
