#pragma once

#include "crossimpact/bars.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace crossimpact {

struct TradeRecord;

/// Carry for the tick rule across consecutive trades of one day.
struct SignState {
    int last_sign = 0;  // 0 before the first price change of the day
    std::optional<double> last_price;
};

struct ClassifiedSecond {
    std::vector<int> signs;
    SignState state;
};

/// Tick rule: a trade takes the sign of its price change against the
/// preceding trade, or repeats the preceding sign when the price is equal.
ClassifiedSecond classify_signs_intrasecond(std::span<const TradeRecord> trades, SignState state);

/// sgn of the summed trade signs; 0 for an empty second.
int aggregate_second_sign(std::span<const int> trade_signs) noexcept;

/// R(tau) for tau = 1..tau_max: mean of r_i(t, tau) * eps_j(t) over seconds
/// with eps_j(t) != 0 and t + tau inside the same day.
struct ResponseCurve {
    std::vector<double> values;
    std::vector<std::size_t> counts;
    std::vector<double> std_errors;  // from day-level batch means

    std::size_t tau_max() const noexcept { return values.size(); }
    bool defined(std::size_t tau) const { return tau >= 1 && tau <= counts.size() && counts[tau - 1] > 0; }
    double at(std::size_t tau) const;
    bool empty() const noexcept;
};

/// Parallel (per-day FFT correlation) estimator.
ResponseCurve response_curve(const BarSeries& bars_i, const BarSeries& bars_j, int tau_max);
/// Direct double loop, single-threaded; reference for response_curve.
ResponseCurve response_curve_serial(const BarSeries& bars_i, const BarSeries& bars_j, int tau_max);

/// Response at one lag conditioned on eps_j != 0 and v_j in [lo, hi).
struct ConditionalResponse {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<double> center;  // geometric mean of the volumes that fell in the bin
    std::vector<double> values;
    std::vector<std::size_t> counts;

    std::size_t bins() const noexcept { return values.size(); }
};

/// n logarithmically spaced bins covering [lo, hi].
std::vector<double> log_bin_edges(double lo, double hi, int n);

ConditionalResponse conditional_response(const BarSeries& bars_i, const BarSeries& bars_j,
                                         std::span<const double> edges, int tau = 1);

/// Trade signs per day.
using SignSeries = std::vector<std::vector<int>>;

SignSeries sign_series(const BarSeries& bars);

/// Normalized sign autocorrelation for tau = 0..tau_max,
///   Theta(tau) = S(tau) / sqrt(Q_head(tau) Q_tail(tau)),
/// where S sums eps(t) eps(t+tau) within days and Q_head, Q_tail sum eps^2
/// over the first and last n - tau seconds of each day. Theta(0) = 1,
/// |Theta| <= 1, and the estimate is unchanged by reversing time.
struct SignCorrelator {
    std::vector<double> values;
    std::vector<std::size_t> counts;  // nonzero signs entering each lag

    std::size_t tau_max() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    /// Symmetric extension, Theta(-tau) = Theta(tau).
    double at(long tau) const;
};

SignCorrelator sign_self_correlator(const SignSeries& signs, int tau_max);
SignCorrelator sign_self_correlator_serial(const SignSeries& signs, int tau_max);

}  // namespace crossimpact
