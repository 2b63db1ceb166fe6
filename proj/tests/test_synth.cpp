#include "doctest.h"
#include "oracles.hpp"

#include "crossimpact/error.hpp"
#include "crossimpact/parallel.hpp"
#include "crossimpact/synth.hpp"

#include <cmath>

using namespace crossimpact;

namespace {

SynthConfig small_config() {
    SynthConfig c;
    c.seed = 99;
    c.days = 4;
    c.seconds_per_day = 1500;
    c.G_ij = {1.13e-4, 7.34, 0.14};
    c.G_ji = {0.79e-4, 4.75, 0.03};
    c.g_i = {0.61};
    c.g_j = {0.5};
    return c;
}

bool same_bars(const BarSeries& a, const BarSeries& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t d = 0; d < a.size(); ++d) {
        if (a[d].date != b[d].date || a[d].bars.size() != b[d].bars.size()) return false;
        for (std::size_t t = 0; t < a[d].bars.size(); ++t) {
            const auto &x = a[d].bars[t], &y = b[d].bars[t];
            if (x.second != y.second || x.sign != y.sign || x.norm_volume != y.norm_volume || x.log_mid != y.log_mid) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("corpus is reproducible and labelled") {
    const auto cfg = small_config();
    const auto a = generate_corpus(cfg);
    const auto b = generate_corpus(cfg);
    CHECK(same_bars(a.bars_i, b.bars_i));
    CHECK(same_bars(a.bars_j, b.bars_j));
    REQUIRE(a.bars_i.size() == 4);
    CHECK(a.bars_i[0].date == "d0001");
    CHECK(a.bars_i[3].date == "d0004");
    CHECK(a.bars_i[0].bars.front().second == 600);
    CHECK(a.bars_i[0].bars.back().second == 600 + 1499);

    auto other = cfg;
    other.seed = 100;
    CHECK_FALSE(same_bars(generate_corpus(other).bars_i, a.bars_i));

    const auto [si, sj] = generate_signs(cfg);
    for (std::size_t d = 0; d < si.size(); ++d) {
        for (std::size_t t = 0; t < si[d].size(); ++t) {
            CHECK(si[d][t] == a.bars_i[d].bars[t].sign);
            CHECK(sj[d][t] == a.bars_j[d].bars[t].sign);
        }
    }
}

TEST_CASE("corpus does not depend on the thread count") {
    const auto cfg = small_config();
    set_thread_count(1);
    const auto one = generate_corpus(cfg);
    set_thread_count(3);
    const auto three = generate_corpus(cfg);
    set_thread_count(0);
    CHECK(same_bars(one.bars_i, three.bars_i));
    CHECK(same_bars(one.bars_j, three.bars_j));
}

TEST_CASE("volumes are normalized over all seconds and mean_g is realized") {
    const auto cfg = small_config();
    const auto c = generate_corpus(cfg);
    double sum = 0.0, g = 0.0;
    std::size_t n = 0, traded = 0;
    for (const auto& day : c.bars_j) {
        for (const auto& bar : day.bars) {
            sum += bar.norm_volume;
            ++n;
            CHECK((bar.sign == 0) == (bar.norm_volume == 0.0));
            if (bar.norm_volume > 0.0) {
                g += std::pow(bar.norm_volume, 0.61);
                ++traded;
            }
        }
    }
    CHECK(std::abs(sum / n - 1.0) < 1e-12);
    CHECK(c.mean_g_i == doctest::Approx(g / traded).epsilon(1e-12));
}

TEST_CASE("log-mids follow the discrete propagator") {
    auto cfg = small_config();
    cfg.G_ii = PowerLawKernel{2e-4, 3.0, 0.4};
    cfg.f_i = {0.7};
    const auto c = generate_corpus(cfg);
    for (std::size_t d = 0; d < 2; ++d) {
        const auto& bi = c.bars_i[d].bars;
        const auto& bj = c.bars_j[d].bars;
        const double base = std::log(cfg.flow_i.initial_price);
        for (std::size_t t = 0; t < bi.size(); t += 37) {
            double expected = 0.0;
            for (std::size_t s = 0; s < t; ++s) {
                const double lag = static_cast<double>(t - s);
                expected += oracle::power_law(1.13e-4, 7.34, 0.14, lag) * oracle::signed_power(bj[s].sign * bj[s].norm_volume, 0.61);
                expected += oracle::power_law(2e-4, 3.0, 0.4, lag) * oracle::signed_power(bi[s].sign * bi[s].norm_volume, 0.7);
            }
            CHECK(std::abs(bi[t].log_mid - base - expected) < 1e-12);
        }
    }
}

TEST_CASE("sign persistence matches the chain") {
    for (double rho : {0.0, 0.5}) {
        SynthConfig cfg = small_config();
        cfg.days = 20;
        cfg.seconds_per_day = 10000;
        cfg.flow_i.rho = rho;
        const auto [si, sj] = generate_signs(cfg);
        const auto c = sign_self_correlator(si, 3);
        const double n = static_cast<double>(c.counts[1]);
        for (int k = 1; k <= 3; ++k) {
            const double expected = synth_sign_correlation(cfg.flow_i, k);
            CHECK(std::abs(c.at(k) - expected) <= 3.0 / std::sqrt(n));
        }
    }
    CHECK(synth_sign_correlation({0.3, 0.6}, 1) == doctest::Approx(0.18));
    CHECK(synth_sign_correlation({0.3, 0.6}, 3) == doctest::Approx(0.18 * 0.58 * 0.58));
    CHECK_THROWS_AS(synth_sign_correlation({0.3, 0.6}, 0), DomainError);
}

TEST_CASE("degenerate flows") {
    auto cfg = small_config();
    cfg.flow_i.trade_prob = 0.0;
    const auto quiet = generate_corpus(cfg);
    for (const auto& day : quiet.bars_i) {
        for (const auto& bar : day.bars) {
            CHECK(bar.sign == 0);
            CHECK(bar.norm_volume == 0.0);
        }
    }
    // stock j's price only moves through stock i's flow, which is silent
    for (const auto& day : quiet.bars_j) {
        for (const auto& bar : day.bars) CHECK(bar.log_mid == std::log(100.0));
    }
    CHECK(quiet.mean_g_j == 0.0);

    auto zero = small_config();
    zero.G_ij = {0.0, 1.0, 0.1};
    zero.G_ji = {0.0, 1.0, 0.1};
    for (const auto& day : generate_corpus(zero).bars_i) {
        for (const auto& bar : day.bars) CHECK(bar.log_mid == std::log(100.0));
    }
}

TEST_CASE("noise is optional and seeded") {
    auto cfg = small_config();
    cfg.noise_sigma = 1e-4;
    const auto a = generate_corpus(cfg);
    const auto b = generate_corpus(cfg);
    CHECK(same_bars(a.bars_i, b.bars_i));
    CHECK_FALSE(same_bars(a.bars_i, generate_corpus(small_config()).bars_i));
}

TEST_CASE("config validation") {
    auto cfg = small_config();
    cfg.flow_j.rho = 1.0;
    CHECK_THROWS_AS(generate_corpus(cfg), ParameterError);
    cfg = small_config();
    cfg.days = 0;
    CHECK_THROWS_AS(generate_corpus(cfg), ParameterError);
    cfg = small_config();
    cfg.g_i = {1.5};
    CHECK_THROWS_AS(generate_signs(cfg), ParameterError);
    cfg = small_config();
    cfg.noise_sigma = -1.0;
    CHECK_THROWS_AS(generate_corpus(cfg), ParameterError);
}
