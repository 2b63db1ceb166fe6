#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace crossimpact {

/// Decaying impact of time lag, G(tau) = gamma0 / (1 + tau/tau0)^beta.
///
/// gamma0 is the impact per unit normalized volume rate (a log-return),
/// tau0 a time scale in seconds and beta the decay exponent.
struct PowerLawKernel {
    double gamma0 = 0.0;
    double tau0 = 1.0;
    double beta = 0.0;

    /// Throws ParameterError unless tau0 > 0, gamma0 finite and beta >= 0.
    void validate() const;

    /// Unchecked evaluation; tau must be >= 0.
    double operator()(double tau) const noexcept;

    bool operator==(const PowerLawKernel&) const = default;
};

/// Checked kernel evaluation. Negative lags raise DomainError: impact is
/// causal and callers are expected to clip.
double kernel_eval(const PowerLawKernel& k, double tau);

/// First antiderivative, integral of G over [0, x]. Zero for x <= 0.
double kernel_primitive(const PowerLawKernel& k, double x);

/// Second antiderivative, integral of (x - u) G(u) over [0, x]. Zero for x <= 0.
double kernel_second_primitive(const PowerLawKernel& k, double x);

/// Rectangle [t_lo, t_hi] x [s_lo, s_hi] in (own time t, source time s).
/// Only its causal part s <= t ever contributes to an integral.
struct CausalBox {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double s_lo = 0.0;
    double s_hi = 0.0;
};

/// Integral of G(t - s) over the causal part of a box, in closed form.
/// The lower-triangle domain {a <= t <= b, c <= s <= min(t, d)} is the same
/// set as the box [a,b]x[c,d] after the causal clip, so one routine serves
/// both. Degenerate or acausal boxes give 0.
double kernel_double_primitive(const PowerLawKernel& k, const CausalBox& box);

/// Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
public:
    explicit GaussLegendre(int order);

    int order() const noexcept { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

    template <class F>
    double integrate(F&& f, double a, double b) const {
        if (!(b > a)) return 0.0;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (b + a);
        double sum = 0.0;
        for (std::size_t n = 0; n < nodes_.size(); ++n) sum += weights_[n] * f(mid + half * nodes_[n]);
        return half * sum;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Tensor Gauss-Legendre evaluation of the same causal box integral for an
/// arbitrary kernel of the lag. The outer range is split where the inner
/// upper limit switches from t to s_hi.
double causal_box_quadrature(const std::function<double(double)>& kernel, const CausalBox& box,
                             const GaussLegendre& rule);

/// Power-law impact of volume, g(v) = v^delta, extended to signed volumes as
/// an odd function.
struct VolumeImpact {
    double delta = 1.0;

    /// Throws ParameterError unless 0 < delta <= 1.
    void validate() const;

    double unsigned_eval(double v) const;
    double signed_eval(double x) const;

    bool operator==(const VolumeImpact&) const = default;
};

/// sign(rate) * |rate|^delta.
double signed_volume_impact(const VolumeImpact& vi, double rate);

/// Empirical kernel indexed by integer lag 1..L (seconds).
struct TabulatedKernel {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    /// Value at lag 1..size().
    double at(std::size_t lag) const;
};

/// A constant trading rate over [start, end).
struct RateSegment {
    double start = 0.0;
    double end = 0.0;
    double rate = 0.0;
};

/// Piecewise-constant signed trading rate; zero outside every segment.
using RateProfile = std::vector<RateSegment>;

double rate_at(const RateProfile& profile, double t) noexcept;

/// Log-midprice increments log m(t_k) - log m(0) on the grid t_k = k*h,
/// k = 0..round(horizon/h), from the discretized propagator sum over sources
/// strictly before t_k (t' <= t_k - h). Noise terms are not simulated.
std::vector<double> price_path(const PowerLawKernel& self_kernel, const PowerLawKernel& cross_kernel,
                               const VolumeImpact& self_vi, const VolumeImpact& cross_vi,
                               const RateProfile& own_rates, const RateProfile& other_rates, double h,
                               double horizon);

}  // namespace crossimpact
