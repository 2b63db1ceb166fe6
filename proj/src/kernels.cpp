#include "crossimpact/kernels.hpp"

#include "crossimpact/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace crossimpact {

namespace {

// Below this u = x/tau0 the primitives are summed as binomial series; the
// closed forms lose relative accuracy as u -> 0.
constexpr double kSeriesThreshold = 0.05;

// (exp(p*L) - 1) / p, the integral of y^(p-1) over [1, e^L]. Reduces to L at
// p = 0, which is the logarithmic branch at beta = 1 (p = 1 - beta) and at
// beta = 2 (p = 2 - beta).
double power_integral(double p, double log_end) {
    if (p == 0.0) return log_end;
    const double z = p * log_end;
    if (std::abs(z) < 1e-4) {
        return log_end * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0)));
    }
    return std::expm1(z) / p;
}

// Sum over k of binom(-beta, k) u^k / weight(k).
template <class Weight>
double binomial_series(double beta, double u, Weight weight) {
    double coeff = 1.0;
    double sum = 0.0;
    double upow = 1.0;
    for (int k = 0; k < 80; ++k) {
        const double term = coeff * upow / weight(k);
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        coeff *= (-beta - k) / (k + 1);
        upow *= u;
    }
    return sum;
}

}  // namespace

void PowerLawKernel::validate() const {
    if (!std::isfinite(gamma0)) throw ParameterError("kernel gamma0 must be finite");
    if (!(tau0 > 0.0) || !std::isfinite(tau0)) throw ParameterError("kernel tau0 must be positive, got " + std::to_string(tau0));
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("kernel beta must be non-negative, got " + std::to_string(beta));
}

double PowerLawKernel::operator()(double tau) const noexcept {
    if (beta == 0.0) return gamma0;
    return gamma0 * std::exp(-beta * std::log1p(tau / tau0));
}

double kernel_eval(const PowerLawKernel& k, double tau) {
    if (!(tau >= 0.0)) throw DomainError("kernel lag must be non-negative, got " + std::to_string(tau));
    return k(tau);
}

double kernel_primitive(const PowerLawKernel& k, double x) {
    if (!(x > 0.0)) return 0.0;
    const double u = x / k.tau0;
    if (u < kSeriesThreshold) {
        return k.gamma0 * x * binomial_series(k.beta, u, [](int n) { return n + 1.0; });
    }
    return k.gamma0 * k.tau0 * power_integral(1.0 - k.beta, std::log1p(u));
}

double kernel_second_primitive(const PowerLawKernel& k, double x) {
    if (!(x > 0.0)) return 0.0;
    const double u = x / k.tau0;
    if (u < kSeriesThreshold) {
        return k.gamma0 * x * x *
               binomial_series(k.beta, u, [](int n) { return (n + 1.0) * (n + 2.0); });
    }
    // tau0^2 * integral over y in [1, 1+u] of (1 + u - y) y^-beta
    const double log_end = std::log1p(u);
    const double value = (1.0 + u) * power_integral(1.0 - k.beta, log_end) - power_integral(2.0 - k.beta, log_end);
    return k.gamma0 * k.tau0 * k.tau0 * value;
}

double kernel_double_primitive(const PowerLawKernel& k, const CausalBox& box) {
    const double a = std::max(box.t_lo, box.s_lo);
    const double b = box.t_hi;
    const double c = box.s_lo;
    const double d = box.s_hi;
    if (!(b > a) || !(d > c)) return 0.0;
    const double near = kernel_second_primitive(k, b - c) - kernel_second_primitive(k, a - c);
    const double far = kernel_second_primitive(k, std::max(b - d, 0.0)) - kernel_second_primitive(k, std::max(a - d, 0.0));
    return near - far;
}

GaussLegendre::GaussLegendre(int order) {
    if (order < 1) throw ParameterError("Gauss-Legendre order must be >= 1");
    const int n = order;
    nodes_.resize(n);
    weights_.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int m = 2; m <= n; ++m) {
                const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int m = 2; m <= n; ++m) {
            const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

double causal_box_quadrature(const std::function<double(double)>& kernel, const CausalBox& box,
                             const GaussLegendre& rule) {
    const double a = std::max(box.t_lo, box.s_lo);
    const double b = box.t_hi;
    const double c = box.s_lo;
    const double d = box.s_hi;
    if (!(b > a) || !(d > c)) return 0.0;

    auto inner = [&](double t) {
        const double upper = std::min(t, d);
        return rule.integrate([&](double s) { return kernel(t - s); }, c, upper);
    };
    const double split = std::clamp(d, a, b);
    return rule.integrate(inner, a, split) + rule.integrate(inner, split, b);
}

void VolumeImpact::validate() const {
    if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("volume impact delta must lie in (0, 1], got " + std::to_string(delta));
}

double VolumeImpact::unsigned_eval(double v) const {
    if (v < 0.0) throw DomainError("unsigned volume impact needs v >= 0");
    return std::pow(v, delta);
}

double VolumeImpact::signed_eval(double x) const {
    const double mag = std::pow(std::abs(x), delta);
    return x < 0.0 ? -mag : (x > 0.0 ? mag : 0.0);
}

double signed_volume_impact(const VolumeImpact& vi, double rate) { return vi.signed_eval(rate); }

double TabulatedKernel::at(std::size_t lag) const {
    if (lag < 1 || lag > values.size()) throw DomainError("tabulated kernel lag out of range");
    return values[lag - 1];
}

double rate_at(const RateProfile& profile, double t) noexcept {
    for (const auto& seg : profile) {
        if (t >= seg.start && t < seg.end) return seg.rate;
    }
    return 0.0;
}

std::vector<double> price_path(const PowerLawKernel& self_kernel, const PowerLawKernel& cross_kernel,
                               const VolumeImpact& self_vi, const VolumeImpact& cross_vi,
                               const RateProfile& own_rates, const RateProfile& other_rates, double h,
                               double horizon) {
    if (!(h > 0.0)) throw ParameterError("price path step must be positive");
    if (!(horizon >= 0.0)) throw ParameterError("price path horizon must be non-negative");
    self_kernel.validate();
    cross_kernel.validate();

    const auto steps = static_cast<long>(std::llround(horizon / h));
    std::vector<double> self_table(steps + 1), cross_table(steps + 1);
    std::vector<double> self_src(steps + 1), cross_src(steps + 1);
    for (long k = 0; k <= steps; ++k) {
        self_table[k] = self_kernel(k * h);
        cross_table[k] = cross_kernel(k * h);
        self_src[k] = self_vi.signed_eval(rate_at(own_rates, k * h));
        cross_src[k] = cross_vi.signed_eval(rate_at(other_rates, k * h));
    }

    std::vector<double> path(steps + 1, 0.0);
#pragma omp parallel for schedule(dynamic, 64)
    for (long k = 1; k <= steps; ++k) {
        double acc = 0.0;
        for (long m = 0; m < k; ++m) {
            acc += self_table[k - m] * self_src[m] + cross_table[k - m] * cross_src[m];
        }
        path[k] = acc * h;
    }
    return path;
}

}  // namespace crossimpact
