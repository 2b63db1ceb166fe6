#pragma once

#include "crossimpact/bars.hpp"
#include "crossimpact/kernels.hpp"
#include "crossimpact/microstructure.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace crossimpact {

/// Order flow of one synthetic stock.
struct SynthFlow {
    double rho = 0.3;         // sign persistence of consecutive trades, in [0, 1)
    double trade_prob = 0.6;  // probability that a second has trades
    double log_mu = 0.0;      // log-normal raw volume per traded second
    double log_sigma = 1.0;
    double initial_price = 100.0;

    void validate() const;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    int days = 10;
    int seconds_per_day = 22800;
    int first_second = 600;  // session second of the first bar

    SynthFlow flow_i;
    SynthFlow flow_j;

    PowerLawKernel G_ij;  // stock j's flow acting on stock i
    PowerLawKernel G_ji;
    VolumeImpact g_i{0.5};  // applied to v_j
    VolumeImpact g_j{0.5};  // applied to v_i
    std::optional<PowerLawKernel> G_ii;
    std::optional<PowerLawKernel> G_jj;
    VolumeImpact f_i{0.5};
    VolumeImpact f_j{0.5};

    double noise_sigma = 0.0;  // Gaussian log-return noise per second, off by default

    void validate() const;
};

/// Normalized sign autocorrelation of a flow at lag k >= 1 in seconds,
/// p rho (1 - p + p rho)^(k - 1), in the convention of sign_self_correlator.
double synth_sign_correlation(const SynthFlow& flow, int k);

/// Sign series of both stocks, the same ones generate_corpus uses.
std::pair<SignSeries, SignSeries> generate_signs(const SynthConfig& config);

struct SynthCorpus {
    BarSeries bars_i;
    BarSeries bars_j;
    double mean_g_i = 0.0;  // realized mean of g_i(v_j) over j's traded seconds
    double mean_g_j = 0.0;
};

/// Bars of both stocks. Log-mids follow the discrete propagator
///   log m_i(t) = log m_i(0) + sum_{s < t} [G_ij(t - s) eps_j(s) g_i(v_j(s)) + G_ii(t - s) eps_i(s) f_i(v_i(s))]
/// within each day. Volumes are normalized corpus-wide by the mean over all
/// seconds, as ingest does. Days use seeds derived from (seed, day), so the
/// output is the same for any thread count.
SynthCorpus generate_corpus(const SynthConfig& config);

}  // namespace crossimpact
