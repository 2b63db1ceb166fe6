#pragma once

// Reference computations written without the library's closed forms, FFT
// helpers or estimators. Everything here is deliberately plain.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

inline double power_law(double gamma0, double tau0, double beta, double tau) {
    return gamma0 * std::pow(1.0 + tau / tau0, -beta);
}

inline double signed_power(double x, double delta) {
    if (x == 0.0) return 0.0;
    return (x > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(x), delta);
}

/// Rate that is `first` on [0, t1), `second` on [t1, t2) and 0 afterwards.
/// t2 may be infinity.
struct TwoPhase {
    double t1;
    double t2;
    double first;
    double second;

    /// (1/h) * integral of f(rate(t)) over [a, a + h].
    template <class F>
    double cell_mean(double a, double h, F&& f) const {
        const double b = a + h;
        auto overlap = [&](double lo, double hi) { return std::max(0.0, std::min(b, hi) - std::max(a, lo)); };
        return (overlap(0.0, t1) * f(first) + overlap(t1, t2) * f(second)) / h;
    }
};

/// Linear convolution through FFTW: y[k] = sum_m x[m] k[k - m].
inline std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size() + b.size();
    std::size_t N = 1;
    while (N < n) N *= 2;
    std::vector<double> ra(N, 0.0), rb(N, 0.0), out(N);
    std::copy(a.begin(), a.end(), ra.begin());
    std::copy(b.begin(), b.end(), rb.begin());
    std::vector<std::complex<double>> sa(N / 2 + 1), sb(N / 2 + 1);
    auto* ca = reinterpret_cast<fftw_complex*>(sa.data());
    auto* cb = reinterpret_cast<fftw_complex*>(sb.data());
    fftw_plan pa = fftw_plan_dft_r2c_1d(static_cast<int>(N), ra.data(), ca, FFTW_ESTIMATE);
    fftw_plan pb = fftw_plan_dft_r2c_1d(static_cast<int>(N), rb.data(), cb, FFTW_ESTIMATE);
    fftw_execute(pa);
    fftw_execute(pb);
    for (std::size_t k = 0; k < sa.size(); ++k) sa[k] *= sb[k];
    fftw_plan pi = fftw_plan_dft_c2r_1d(static_cast<int>(N), ca, out.data(), FFTW_ESTIMATE);
    fftw_execute(pi);
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pi);
    for (double& v : out) v /= static_cast<double>(N);
    return out;
}

/// Riemann sum of
///   integral_0^T_own dt rate_own(t) integral_{s < t} G(t - s) g(rate_other(s)) ds
/// on a uniform grid of step h. The other stock keeps selling after its own
/// period ends (its second phase runs to infinity), which is the region-free
/// form of the written cost integrals. Cells use exact averages of the
/// piecewise-constant rates; the diagonal triangles use G at their centroid.
struct CostOracleInput {
    double gamma0, tau0, beta;
    double delta;
    TwoPhase own;    // t2 = own period
    TwoPhase other;  // t2 = infinity
    double h;
};

inline double riemann_cost(const CostOracleInput& in) {
    const double T = in.own.t2;
    const auto n = static_cast<std::size_t>(std::ceil(T / in.h - 1e-9));
    std::vector<double> a(n), b(n), G(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = in.own.cell_mean(k * in.h, in.h, [](double r) { return r; });
        b[k] = in.other.cell_mean(k * in.h, in.h, [&](double r) { return signed_power(r, in.delta); });
        if (k > 0) G[k] = power_law(in.gamma0, in.tau0, in.beta, k * in.h);
    }
    const auto conv = fft_convolve(G, b);
    const double diag = power_law(in.gamma0, in.tau0, in.beta, in.h / 3.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += a[k] * (conv[k] + 0.5 * diag * b[k]);
    return sum * in.h * in.h;
}

/// Costs of both stocks for presets (zeta_v, T_i, vdot_in_i) and strategy
/// (kappa_i, kappa_j, zeta_T), derived here from the schedule definitions.
struct PairCost {
    double omega_ij;
    double omega_ji;
};

struct Schedule {
    double T, switch_time, buy, sell;  // sell is the (negative) signed rate
};

inline std::pair<Schedule, Schedule> schedules(double zeta_v, double T_i, double vdot_in_i, double ki, double kj,
                                               double zeta_T) {
    // stock i: total rate vdot_in/kappa, buys for (1 - kappa) of its period
    const double vi = vdot_in_i / ki;
    const double Tj = T_i / zeta_T;
    // bought volumes: v_i = vdot_in_i (1-ki) T_i and v_j = zeta-ratio of it
    const double bought_i = vdot_in_i * (1.0 - ki) * T_i;
    const double bought_j = bought_i / zeta_v;
    const double vj_in = bought_j / ((1.0 - kj) * Tj);
    const double vj = vj_in / kj;
    Schedule si{T_i, (1.0 - ki) * T_i, vdot_in_i, -(1.0 - ki) * vi};
    Schedule sj{Tj, (1.0 - kj) * Tj, vj_in, -(1.0 - kj) * vj};
    return {si, sj};
}

inline PairCost riemann_pair(double zeta_v, double T_i, double vdot_in_i, double ki, double kj, double zeta_T,
                             double g0_ij, double t0_ij, double b_ij, double d_ij, double g0_ji, double t0_ji,
                             double b_ji, double d_ji, double h_divisor = 1e4) {
    const auto [si, sj] = schedules(zeta_v, T_i, vdot_in_i, ki, kj, zeta_T);
    const double h = std::min(si.T, sj.T) / h_divisor;
    const double inf = std::numeric_limits<double>::infinity();
    CostOracleInput ij{g0_ij, t0_ij, b_ij, d_ij, {si.switch_time, si.T, si.buy, si.sell},
                       {sj.switch_time, inf, sj.buy, sj.sell}, h};
    CostOracleInput ji{g0_ji, t0_ji, b_ji, d_ji, {sj.switch_time, sj.T, sj.buy, sj.sell},
                       {si.switch_time, inf, si.buy, si.sell}, h};
    return {riemann_cost(ij), riemann_cost(ji)};
}

/// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Simpson on [0, x] with panels refined geometrically towards 0, for
/// integrands that vary on the scale `scale` near the origin.
template <class F>
double simpson_graded(F&& f, double x, double scale, int n = 2000) {
    double lo = 0.0, hi = std::min(x, scale);
    double sum = simpson(f, lo, hi, n);
    while (hi < x) {
        lo = hi;
        hi = std::min(x, 2.0 * hi);
        sum += simpson(f, lo, hi, n);
    }
    return sum;
}

/// Normalized sign autocorrelation by direct summation over days.
inline double sign_correlation(const std::vector<std::vector<int>>& days, std::size_t tau) {
    double num = 0.0, head = 0.0, tail = 0.0;
    for (const auto& s : days) {
        for (std::size_t t = 0; t + tau < s.size(); ++t) {
            num += s[t] * s[t + tau];
            head += s[t] * s[t];
            tail += s[t + tau] * s[t + tau];
        }
    }
    return num / std::sqrt(head * tail);
}

/// Model response of a price driven only by another stock's flow:
///   R(tau) = <g> sum_{tau' >= 1} [Theta(tau - tau') - Theta(tau')] G(tau'),
/// with the lag sum truncated at `terms`.
template <class Theta, class Kernel>
double model_response(Theta&& theta, Kernel&& G, double mean_g, int tau, int terms) {
    double sum = 0.0;
    for (int k = 1; k <= terms; ++k) sum += (theta(std::abs(tau - k)) - theta(k)) * G(k);
    return mean_g * sum;
}

}  // namespace oracle

namespace oracle {

/// Grid sum of G(t - s) over the causal part of [a,b]x[c,d], all four limits
/// being integer multiples of h. midpoint = true uses cell centres and the
/// triangle centroid on the diagonal (second order); false uses left
/// endpoints with the whole diagonal cell (first order).
inline double grid_box(double gamma0, double tau0, double beta, long A, long B, long C, long D, double h,
                       bool midpoint) {
    double sum = 0.0;
    // t cell K in [A, B), s cell M in [C, D), lag index d = K - M >= 0
    const long dmin = std::max(0L, A - (D - 1));
    const long dmax = (B - 1) - C;
    for (long d = dmin; d <= dmax; ++d) {
        // number of (K, M) with K - M = d
        const long klo = std::max(A, C + d);
        const long khi = std::min(B - 1, D - 1 + d);
        if (khi < klo) continue;
        const double pairs = static_cast<double>(khi - klo + 1);
        double g;
        if (d == 0) {
            g = midpoint ? 0.5 * power_law(gamma0, tau0, beta, h / 3.0) : power_law(gamma0, tau0, beta, 0.0);
        } else {
            g = power_law(gamma0, tau0, beta, d * h);
        }
        sum += pairs * g;
    }
    return sum * h * h;
}

}  // namespace oracle
