#include "crossimpact/microstructure.hpp"

#include "crossimpact/error.hpp"
#include "crossimpact/ingest.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crossimpact {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sgn(double x) noexcept { return (x > 0.0) - (x < 0.0); }

void require_tau_max(int tau_max, int lowest) {
    if (tau_max < lowest) throw ParameterError("tau_max must be >= " + std::to_string(lowest));
}

// Per-day sums for every lag, reduced in day order so the result does not
// depend on how days were scheduled.
struct DaySums {
    std::vector<double> sum;
    std::vector<std::size_t> count;
};

ResponseCurve reduce_response(const std::vector<DaySums>& days, int tau_max) {
    const auto L = static_cast<std::size_t>(tau_max);
    ResponseCurve out;
    out.values.assign(L, kNaN);
    out.counts.assign(L, 0);
    out.std_errors.assign(L, kNaN);
    std::vector<double> S(L, 0.0), SS(L, 0.0), SC(L, 0.0), CC(L, 0.0);
    std::vector<std::size_t> D(L, 0);
    for (const auto& d : days) {
        for (std::size_t k = 0; k < L; ++k) {
            const double c = static_cast<double>(d.count[k]);
            if (c == 0.0) continue;
            S[k] += d.sum[k];
            SS[k] += d.sum[k] * d.sum[k];
            SC[k] += d.sum[k] * c;
            CC[k] += c * c;
            out.counts[k] += d.count[k];
            ++D[k];
        }
    }
    for (std::size_t k = 0; k < L; ++k) {
        if (out.counts[k] == 0) continue;
        const double C = static_cast<double>(out.counts[k]);
        const double R = S[k] / C;
        out.values[k] = R;
        if (D[k] >= 2) {
            // ratio-estimator variance over day clusters
            const double ss = std::max(0.0, SS[k] - 2.0 * R * SC[k] + R * R * CC[k]);
            const double nd = static_cast<double>(D[k]);
            out.std_errors[k] = std::sqrt(ss * nd / (nd - 1.0)) / C;
        }
    }
    return out;
}

std::vector<double> day_log_mid(const DayBars& day) {
    std::vector<double> x(day.bars.size());
    if (x.empty()) return x;
    const double base = day.bars.front().log_mid;
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = day.bars[t].log_mid - base;
    return x;
}

std::vector<double> day_signs(const DayBars& day) {
    std::vector<double> e(day.bars.size());
    for (std::size_t t = 0; t < e.size(); ++t) e[t] = day.bars[t].sign;
    return e;
}

struct CorrelatorSums {
    std::vector<double> num;
    std::vector<double> head;
    std::vector<double> tail;
};

SignCorrelator finish_correlator(const CorrelatorSums& s) {
    SignCorrelator out;
    const std::size_t L = s.num.size();
    out.values.assign(L, kNaN);
    out.counts.assign(L, 0);
    for (std::size_t k = 0; k < L; ++k) {
        out.counts[k] = static_cast<std::size_t>(s.head[k]);
        const double den = s.head[k] * s.tail[k];
        if (den > 0.0) out.values[k] = std::clamp(s.num[k] / std::sqrt(den), -1.0, 1.0);
    }
    return out;
}

}  // namespace

ClassifiedSecond classify_signs_intrasecond(std::span<const TradeRecord> trades, SignState state) {
    ClassifiedSecond out;
    out.signs.reserve(trades.size());
    for (const auto& t : trades) {
        if (state.last_price && t.price != *state.last_price) state.last_sign = sgn(t.price - *state.last_price);
        state.last_price = t.price;
        out.signs.push_back(state.last_sign);
    }
    out.state = state;
    return out;
}

int aggregate_second_sign(std::span<const int> trade_signs) noexcept {
    long sum = 0;
    for (int s : trade_signs) sum += s;
    return (sum > 0) - (sum < 0);
}

double ResponseCurve::at(std::size_t tau) const {
    if (tau < 1 || tau > values.size()) throw std::out_of_range("response lag out of range");
    return values[tau - 1];
}

bool ResponseCurve::empty() const noexcept {
    return std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c == 0; });
}

ResponseCurve response_curve(const BarSeries& bars_i, const BarSeries& bars_j, int tau_max) {
    require_tau_max(tau_max, 1);
    check_aligned(bars_i, bars_j);
    const auto L = static_cast<std::size_t>(tau_max);

    detail::FftPlans plans;
    for (const auto& day : bars_i) {
        const std::size_t n = day.bars.size();
        if (n >= 2) plans.get(detail::fft_size(n + std::min(L, n - 1)));
    }

    std::vector<DaySums> days(bars_i.size());
#pragma omp parallel for schedule(dynamic)
    for (long d = 0; d < static_cast<long>(bars_i.size()); ++d) {
        auto& out = days[d];
        out.sum.assign(L, 0.0);
        out.count.assign(L, 0);
        const std::size_t n = bars_i[d].bars.size();
        if (n < 2) continue;
        const auto x = day_log_mid(bars_i[d]);
        const auto e = day_signs(bars_j[d]);
        const std::size_t lags = std::min(L, n - 1);
        // sum_t e(t) x(t + tau)
        const auto forward = detail::cross_correlate(plans.at(detail::fft_size(n + lags)), e, x, lags);
        std::vector<double> prefix_xe(n + 1, 0.0);
        std::vector<std::size_t> prefix_nz(n + 1, 0);
        for (std::size_t t = 0; t < n; ++t) {
            prefix_xe[t + 1] = prefix_xe[t] + x[t] * e[t];
            prefix_nz[t + 1] = prefix_nz[t] + (e[t] != 0.0);
        }
        for (std::size_t tau = 1; tau <= lags; ++tau) {
            out.sum[tau - 1] = forward[tau] - prefix_xe[n - tau];
            out.count[tau - 1] = prefix_nz[n - tau];
        }
    }
    return reduce_response(days, tau_max);
}

ResponseCurve response_curve_serial(const BarSeries& bars_i, const BarSeries& bars_j, int tau_max) {
    require_tau_max(tau_max, 1);
    check_aligned(bars_i, bars_j);
    const auto L = static_cast<std::size_t>(tau_max);
    std::vector<DaySums> days(bars_i.size());
    for (std::size_t d = 0; d < bars_i.size(); ++d) {
        auto& out = days[d];
        out.sum.assign(L, 0.0);
        out.count.assign(L, 0);
        const auto& bi = bars_i[d].bars;
        const auto& bj = bars_j[d].bars;
        const std::size_t n = bi.size();
        for (std::size_t tau = 1; tau <= L && tau < n; ++tau) {
            for (std::size_t t = 0; t + tau < n; ++t) {
                if (bj[t].sign == 0) continue;
                out.sum[tau - 1] += (bi[t + tau].log_mid - bi[t].log_mid) * bj[t].sign;
                ++out.count[tau - 1];
            }
        }
    }
    return reduce_response(days, tau_max);
}

std::vector<double> log_bin_edges(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) throw ParameterError("log bins need 0 < lo < hi");
    if (n < 1) throw ParameterError("need at least one bin");
    std::vector<double> edges(static_cast<std::size_t>(n) + 1);
    const double a = std::log(lo), b = std::log(hi);
    for (int k = 0; k <= n; ++k) edges[k] = std::exp(a + (b - a) * k / n);
    edges.front() = lo;
    edges.back() = hi;
    return edges;
}

ConditionalResponse conditional_response(const BarSeries& bars_i, const BarSeries& bars_j,
                                         std::span<const double> edges, int tau) {
    if (tau < 1) throw ParameterError("tau must be >= 1");
    if (edges.size() < 2) throw ParameterError("need at least two bin edges");
    for (std::size_t k = 1; k < edges.size(); ++k) {
        if (!(edges[k] > edges[k - 1])) throw ParameterError("bin edges must increase");
    }
    check_aligned(bars_i, bars_j);
    const std::size_t nb = edges.size() - 1;
    ConditionalResponse out;
    out.lo.assign(edges.begin(), edges.end() - 1);
    out.hi.assign(edges.begin() + 1, edges.end());
    out.values.assign(nb, 0.0);
    out.center.assign(nb, 0.0);
    out.counts.assign(nb, 0);
    const auto lag = static_cast<std::size_t>(tau);
    for (std::size_t d = 0; d < bars_i.size(); ++d) {
        const auto& bi = bars_i[d].bars;
        const auto& bj = bars_j[d].bars;
        for (std::size_t t = 0; t + lag < bi.size(); ++t) {
            const int e = bj[t].sign;
            const double v = bj[t].norm_volume;
            if (e == 0 || v < edges.front() || v > edges.back()) continue;
            auto k = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
            k = std::min(k, nb) - 1;  // the top edge closes the last bin
            out.values[k] += (bi[t + lag].log_mid - bi[t].log_mid) * e;
            out.center[k] += std::log(v);
            ++out.counts[k];
        }
    }
    for (std::size_t k = 0; k < nb; ++k) {
        if (out.counts[k] == 0) {
            out.values[k] = kNaN;
            out.center[k] = std::sqrt(out.lo[k] * out.hi[k]);
            continue;
        }
        const double c = static_cast<double>(out.counts[k]);
        out.values[k] /= c;
        out.center[k] = std::exp(out.center[k] / c);
    }
    return out;
}

SignSeries sign_series(const BarSeries& bars) {
    SignSeries out;
    out.reserve(bars.size());
    for (const auto& day : bars) {
        std::vector<int> s(day.bars.size());
        for (std::size_t t = 0; t < s.size(); ++t) s[t] = day.bars[t].sign;
        out.push_back(std::move(s));
    }
    return out;
}

double SignCorrelator::at(long tau) const {
    const auto k = static_cast<std::size_t>(tau < 0 ? -tau : tau);
    if (k >= values.size()) throw std::out_of_range("correlator lag out of range");
    return values[k];
}

SignCorrelator sign_self_correlator(const SignSeries& signs, int tau_max) {
    require_tau_max(tau_max, 0);
    const auto L = static_cast<std::size_t>(tau_max) + 1;
    detail::FftPlans plans;
    for (const auto& day : signs) {
        const std::size_t n = day.size();
        if (n >= 1) plans.get(detail::fft_size(n + std::min(L - 1, n - 1)));
    }
    std::vector<CorrelatorSums> days(signs.size());
#pragma omp parallel for schedule(dynamic)
    for (long d = 0; d < static_cast<long>(signs.size()); ++d) {
        auto& out = days[d];
        out.num.assign(L, 0.0);
        out.head.assign(L, 0.0);
        out.tail.assign(L, 0.0);
        const auto& s = signs[d];
        const std::size_t n = s.size();
        if (n == 0) continue;
        std::vector<double> e(s.begin(), s.end());
        const std::size_t lags = std::min(L - 1, n - 1);
        const auto auto_corr = detail::cross_correlate(plans.at(detail::fft_size(n + lags)), e, e, lags);
        std::vector<double> prefix(n + 1, 0.0);
        for (std::size_t t = 0; t < n; ++t) prefix[t + 1] = prefix[t] + e[t] * e[t];
        for (std::size_t tau = 0; tau <= lags; ++tau) {
            out.num[tau] = std::round(auto_corr[tau]);  // integer-valued for ternary signs
            out.head[tau] = prefix[n - tau];
            out.tail[tau] = prefix[n] - prefix[tau];
        }
    }
    CorrelatorSums total{std::vector<double>(L, 0.0), std::vector<double>(L, 0.0), std::vector<double>(L, 0.0)};
    for (const auto& d : days) {
        for (std::size_t k = 0; k < L; ++k) {
            total.num[k] += d.num[k];
            total.head[k] += d.head[k];
            total.tail[k] += d.tail[k];
        }
    }
    return finish_correlator(total);
}

SignCorrelator sign_self_correlator_serial(const SignSeries& signs, int tau_max) {
    require_tau_max(tau_max, 0);
    const auto L = static_cast<std::size_t>(tau_max) + 1;
    CorrelatorSums total{std::vector<double>(L, 0.0), std::vector<double>(L, 0.0), std::vector<double>(L, 0.0)};
    for (const auto& s : signs) {
        const std::size_t n = s.size();
        for (std::size_t tau = 0; tau < L && tau < n; ++tau) {
            long num = 0, head = 0, tail = 0;
            for (std::size_t t = 0; t + tau < n; ++t) {
                num += s[t] * s[t + tau];
                head += s[t] * s[t];
                tail += s[t + tau] * s[t + tau];
            }
            total.num[tau] += static_cast<double>(num);
            total.head[tau] += static_cast<double>(head);
            total.tail[tau] += static_cast<double>(tail);
        }
    }
    return finish_correlator(total);
}

}  // namespace crossimpact
