#include "crossimpact/synth.hpp"

#include "crossimpact/error.hpp"
#include "fft.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace crossimpact {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream per (day, stock, purpose).
std::mt19937_64 stream(std::uint64_t seed, int day, int stock, int purpose) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ static_cast<std::uint64_t>(day));
    s = splitmix64(s ^ (static_cast<std::uint64_t>(stock) << 8 | static_cast<std::uint64_t>(purpose)));
    return std::mt19937_64(s);
}

struct DayFlow {
    std::vector<int> signs;
    std::vector<double> raw_volume;
};

DayFlow generate_flow(const SynthFlow& f, std::uint64_t seed, int day, int stock, int n) {
    auto rng = stream(seed, day, stock, 0);
    std::bernoulli_distribution trade(f.trade_prob);
    std::bernoulli_distribution repeat(0.5 * (1.0 + f.rho));
    std::bernoulli_distribution coin(0.5);
    std::lognormal_distribution<double> size(f.log_mu, f.log_sigma);
    DayFlow out{std::vector<int>(n, 0), std::vector<double>(n, 0.0)};
    int last = 0;
    for (int t = 0; t < n; ++t) {
        if (!trade(rng)) continue;
        if (last == 0) {
            last = coin(rng) ? 1 : -1;
        } else if (!repeat(rng)) {
            last = -last;
        }
        out.signs[t] = last;
        out.raw_volume[t] = size(rng);
    }
    return out;
}

std::string day_label(int d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "d%04d", d + 1);
    return buf;
}

std::vector<double> kernel_table(const PowerLawKernel& k, int n) {
    std::vector<double> table(n, 0.0);
    for (int tau = 1; tau < n; ++tau) table[tau] = k(tau);
    return table;
}

void add_impact(std::vector<double>& path, const detail::RealFft& fft, const std::vector<double>& table,
                const std::vector<double>& signed_impact) {
    bool any = false;
    for (double x : signed_impact) any = any || x != 0.0;
    if (!any) return;
    const auto y = detail::causal_convolve(fft, table, signed_impact);
    for (std::size_t t = 0; t < path.size(); ++t) path[t] += y[t];
}

}  // namespace

void SynthFlow::validate() const {
    if (!(rho >= 0.0 && rho < 1.0)) throw ParameterError("sign persistence rho must lie in [0, 1)");
    if (!(trade_prob >= 0.0 && trade_prob <= 1.0)) throw ParameterError("trade probability must lie in [0, 1]");
    if (!std::isfinite(log_mu) || !(log_sigma >= 0.0) || !std::isfinite(log_sigma)) {
        throw ParameterError("volume distribution needs finite mu and sigma >= 0");
    }
    if (!(initial_price > 0.0) || !std::isfinite(initial_price)) throw ParameterError("initial price must be positive");
}

void SynthConfig::validate() const {
    if (days < 1) throw ParameterError("synth needs at least one day");
    if (seconds_per_day < 2) throw ParameterError("synth needs at least two seconds per day");
    flow_i.validate();
    flow_j.validate();
    G_ij.validate();
    G_ji.validate();
    g_i.validate();
    g_j.validate();
    if (G_ii) G_ii->validate();
    if (G_jj) G_jj->validate();
    f_i.validate();
    f_j.validate();
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw ParameterError("noise sigma must be >= 0");
}

double synth_sign_correlation(const SynthFlow& flow, int k) {
    if (k < 1) throw DomainError("lag must be >= 1");
    const double p = flow.trade_prob;
    return p * flow.rho * std::pow(1.0 - p + p * flow.rho, k - 1);
}

std::pair<SignSeries, SignSeries> generate_signs(const SynthConfig& config) {
    config.validate();
    std::pair<SignSeries, SignSeries> out;
    out.first.resize(config.days);
    out.second.resize(config.days);
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < config.days; ++d) {
        out.first[d] = generate_flow(config.flow_i, config.seed, d, 0, config.seconds_per_day).signs;
        out.second[d] = generate_flow(config.flow_j, config.seed, d, 1, config.seconds_per_day).signs;
    }
    return out;
}

SynthCorpus generate_corpus(const SynthConfig& config) {
    config.validate();
    const int n = config.seconds_per_day;
    const int D = config.days;

    std::vector<DayFlow> flow_i(D), flow_j(D);
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < D; ++d) {
        flow_i[d] = generate_flow(config.flow_i, config.seed, d, 0, n);
        flow_j[d] = generate_flow(config.flow_j, config.seed, d, 1, n);
    }

    // corpus-wide normalization by the mean over all seconds
    auto mean_of = [&](const std::vector<DayFlow>& flows) {
        double sum = 0.0;
        for (const auto& f : flows) {
            for (double v : f.raw_volume) sum += v;
        }
        return sum / (static_cast<double>(D) * n);
    };
    const double mean_i = mean_of(flow_i);
    const double mean_j = mean_of(flow_j);
    for (auto& f : flow_i) {
        for (double& v : f.raw_volume) v = mean_i > 0.0 ? v / mean_i : 0.0;
    }
    for (auto& f : flow_j) {
        for (double& v : f.raw_volume) v = mean_j > 0.0 ? v / mean_j : 0.0;
    }

    detail::FftPlans plans;
    const auto& fft = plans.get(detail::fft_size(2 * static_cast<std::size_t>(n)));
    const auto table_ij = kernel_table(config.G_ij, n);
    const auto table_ji = kernel_table(config.G_ji, n);
    const auto table_ii = config.G_ii ? kernel_table(*config.G_ii, n) : std::vector<double>{};
    const auto table_jj = config.G_jj ? kernel_table(*config.G_jj, n) : std::vector<double>{};

    SynthCorpus out;
    out.bars_i.resize(D);
    out.bars_j.resize(D);
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < D; ++d) {
        const auto& fi = flow_i[d];
        const auto& fj = flow_j[d];
        std::vector<double> x_i_on_j(n), x_j_on_i(n), x_i_self(n), x_j_self(n);
        for (int t = 0; t < n; ++t) {
            x_j_on_i[t] = fj.signs[t] * config.g_i.signed_eval(fj.raw_volume[t]);
            x_i_on_j[t] = fi.signs[t] * config.g_j.signed_eval(fi.raw_volume[t]);
            x_i_self[t] = fi.signs[t] * config.f_i.signed_eval(fi.raw_volume[t]);
            x_j_self[t] = fj.signs[t] * config.f_j.signed_eval(fj.raw_volume[t]);
        }
        std::vector<double> path_i(n, 0.0), path_j(n, 0.0);
        add_impact(path_i, fft, table_ij, x_j_on_i);
        add_impact(path_j, fft, table_ji, x_i_on_j);
        if (config.G_ii) add_impact(path_i, fft, table_ii, x_i_self);
        if (config.G_jj) add_impact(path_j, fft, table_jj, x_j_self);
        if (config.noise_sigma > 0.0) {
            auto rng_i = stream(config.seed, d, 0, 1);
            auto rng_j = stream(config.seed, d, 1, 1);
            std::normal_distribution<double> noise(0.0, config.noise_sigma);
            double acc_i = 0.0, acc_j = 0.0;
            for (int t = 1; t < n; ++t) {
                acc_i += noise(rng_i);
                acc_j += noise(rng_j);
                path_i[t] += acc_i;
                path_j[t] += acc_j;
            }
        }

        const double base_i = std::log(config.flow_i.initial_price);
        const double base_j = std::log(config.flow_j.initial_price);
        auto& bi = out.bars_i[d];
        auto& bj = out.bars_j[d];
        bi.date = bj.date = day_label(d);
        bi.bars.resize(n);
        bj.bars.resize(n);
        for (int t = 0; t < n; ++t) {
            bi.bars[t] = {config.first_second + t, fi.signs[t], fi.raw_volume[t], base_i + path_i[t], false};
            bj.bars[t] = {config.first_second + t, fj.signs[t], fj.raw_volume[t], base_j + path_j[t], false};
        }
    }

    auto realized_mean = [](const std::vector<DayFlow>& flows, const VolumeImpact& g) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& f : flows) {
            for (double v : f.raw_volume) {
                if (v > 0.0) {
                    sum += g.unsigned_eval(v);
                    ++count;
                }
            }
        }
        return count > 0 ? sum / static_cast<double>(count) : 0.0;
    };
    out.mean_g_i = realized_mean(flow_j, config.g_i);
    out.mean_g_j = realized_mean(flow_i, config.g_j);
    return out;
}

}  // namespace crossimpact
