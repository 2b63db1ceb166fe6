#include "crossimpact/calibration.hpp"

#include "crossimpact/error.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>

namespace crossimpact {

namespace {

constexpr double kMaxCondition = 1e12;

// Residuals of the scaled power law, parameters (gamma0 / scale, log tau0, beta).
struct PowerLawResidual : Eigen::DenseFunctor<double> {
    const std::vector<double>& lags;
    const std::vector<double>& target;  // already divided by scale

    PowerLawResidual(const std::vector<double>& l, const std::vector<double>& t)
        : DenseFunctor<double>(3, static_cast<int>(l.size())), lags(l), target(t) {}

    int operator()(const InputType& p, ValueType& f) const {
        const double tau0 = std::exp(p[1]);
        for (std::size_t k = 0; k < lags.size(); ++k) {
            f[k] = p[0] * std::pow(1.0 + lags[k] / tau0, -p[2]) - target[k];
        }
        return 0;
    }

    int df(const InputType& p, JacobianType& J) const {
        const double tau0 = std::exp(p[1]);
        for (std::size_t k = 0; k < lags.size(); ++k) {
            const double u = lags[k] / tau0;
            const double base = std::pow(1.0 + u, -p[2]);
            J(k, 0) = base;
            J(k, 1) = p[0] * p[2] * u * base / (1.0 + u);
            J(k, 2) = -p[0] * std::log1p(u) * base;
        }
        return 0;
    }
};

double window_residual(const PowerLawKernel& k, const TabulatedKernel& tab, int first, int last) {
    double ss = 0.0;
    for (int lag = first; lag <= last; ++lag) {
        const double d = k(lag) - tab.at(lag);
        ss += d * d;
    }
    return std::sqrt(ss);
}

template <class F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const CalibrationError& e) {
        throw CalibrationError(stage, e.what());
    } catch (const Error& e) {
        throw CalibrationError(stage, e.what());
    }
}

DirectionCalibration calibrate_direction(const BarSeries& target, const BarSeries& source,
                                         const CalibrationConfig& cfg, const std::string& name) {
    DirectionCalibration out;
    std::size_t days_with_signal = 0;
    double v_lo = 1.0;
    for (const auto& day : source) {
        bool any = false;
        for (const auto& b : day.bars) {
            if (b.sign == 0) continue;
            ++out.trading_seconds;
            any = true;
            if (b.norm_volume > 0.0) v_lo = std::min(v_lo, b.norm_volume);
        }
        days_with_signal += any;
    }

    out.response = in_stage(name + "/response", [&] {
        if (out.trading_seconds == 0) throw CalibrationError("response", "source stock has no signed seconds");
        auto R = response_curve(target, source, cfg.cutoff);
        if (R.empty() || !R.defined(1)) throw CalibrationError("response", "no valid response samples");
        return R;
    });

    out.volume_fit = in_stage(name + "/volume_impact", [&] {
        if (!(v_lo < 1.0)) throw CalibrationError("volume_impact", "no signed seconds with volume below 1");
        const auto edges = log_bin_edges(v_lo, 1.0, cfg.volume_bins);
        const auto curve = conditional_response(target, source, edges, 1);
        auto fit = fit_volume_impact(curve, out.response.at(1), cfg.volume_window);
        if (!(fit.delta > 0.0 && fit.delta <= 1.0)) {
            throw CalibrationError("volume_impact", "fitted exponent " + std::to_string(fit.delta) + " outside (0, 1]");
        }
        return fit;
    });
    out.delta = out.volume_fit.delta;
    out.mean_g = in_stage(name + "/volume_impact", [&] { return mean_volume_impact(source, out.delta); });

    const auto theta = in_stage(name + "/sign_correlator", [&] {
        auto th = sign_self_correlator(sign_series(source), cfg.cutoff);
        for (double v : th.values) {
            if (!std::isfinite(v)) {
                throw CalibrationError("sign_correlator", "correlator undefined below the cut-off; days too short?");
            }
        }
        return th;
    });

    out.extraction = in_stage(name + "/extraction", [&] {
        const auto A = build_sign_matrix(theta, cfg.cutoff);
        return extract_kernel(out.response, A, out.mean_g, cfg.weight, cfg.report_len);
    });
    out.fit = in_stage(name + "/fit", [&] { return fit_kernel(out.extraction.kernel, cfg.fit_window); });

    out.low_sample = days_with_signal < 2 || out.trading_seconds < 10 * static_cast<std::size_t>(cfg.cutoff);
    return out;
}

}  // namespace

VolumeImpactFit fit_volume_impact(const ConditionalResponse& curve, double r1, const VolumeFitWindow& window) {
    if (!std::isfinite(r1) || r1 == 0.0) throw CalibrationError("volume_impact", "R(1) must be finite and nonzero");
    VolumeImpactFit out;
    for (std::size_t k = 0; k < curve.bins(); ++k) {
        const double v = curve.center[k];
        if (!(v > window.v_min && v <= window.v_max)) continue;
        if (curve.counts[k] < window.min_samples) continue;
        const double ratio = curve.values[k] / r1;
        if (!(ratio > 0.0) || !std::isfinite(ratio)) continue;
        out.v.push_back(v);
        out.ratio.push_back(ratio);
    }
    const std::size_t n = out.v.size();
    if (n < 3) {
        throw CalibrationError("volume_impact", "need 3 usable bins, have " + std::to_string(n));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += std::log(out.v[k]);
        my += std::log(out.ratio[k]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = std::log(out.v[k]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(out.ratio[k]) - my);
    }
    if (!(sxx > 0.0)) throw CalibrationError("volume_impact", "bins share one volume coordinate");
    out.delta = sxy / sxx;
    out.intercept = my - out.delta * mx;
    double ss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = std::log(out.ratio[k]) - (out.intercept + out.delta * std::log(out.v[k]));
        ss += e * e;
    }
    out.residual_rms = std::sqrt(ss / static_cast<double>(n));
    return out;
}

double mean_volume_impact(std::span<const double> volumes, double delta) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : volumes) {
        if (!(v > 0.0)) continue;
        sum += std::pow(v, delta);
        ++n;
    }
    if (n == 0) throw CalibrationError("volume_impact", "no traded seconds to average over");
    return sum / static_cast<double>(n);
}

double mean_volume_impact(const BarSeries& bars, double delta) {
    std::vector<double> v;
    v.reserve(total_seconds(bars));
    for (const auto& day : bars) {
        for (const auto& b : day.bars) v.push_back(b.norm_volume);
    }
    return mean_volume_impact(v, delta);
}

Eigen::MatrixXd build_sign_matrix(const SignCorrelator& theta, int L) {
    if (L < 1) throw ParameterError("sign matrix size must be >= 1");
    if (static_cast<std::size_t>(L) > theta.tau_max() || theta.values.empty()) {
        throw ParameterError("sign correlator known up to lag " + std::to_string(theta.tau_max()) + ", need " +
                             std::to_string(L));
    }
    Eigen::MatrixXd A(L, L);
    for (int c = 1; c <= L; ++c) {
        const double tail = theta.at(c);
        for (int r = 1; r <= L; ++r) A(r - 1, c - 1) = theta.at(r - c) - tail;
    }
    return A;
}

KernelExtraction extract_kernel(const ResponseCurve& R, const Eigen::MatrixXd& A, double mean_g, double w,
                                int report_len) {
    const Eigen::Index L = A.rows();
    if (A.cols() != L || L < 1) throw ParameterError("sign matrix must be square and non-empty");
    if (!(mean_g > 0.0) || !std::isfinite(mean_g)) throw ParameterError("mean volume impact must be positive");
    if (!(w > 0.0) || !std::isfinite(w)) throw ParameterError("weight must be positive");
    if (report_len < 1 || report_len > L) throw ParameterError("report length must lie in 1..L");
    if (R.tau_max() < static_cast<std::size_t>(L)) throw ParameterError("response shorter than the cut-off");

    const double scale = w / mean_g;
    Eigen::VectorXd b(L);
    for (Eigen::Index k = 0; k < L; ++k) {
        if (!R.defined(static_cast<std::size_t>(k) + 1)) {
            throw CalibrationError("extraction", "response undefined at lag " + std::to_string(k + 1));
        }
        b[k] = scale * R.values[k];
    }

    KernelExtraction out;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    out.rcond = lu.rcond();
    Eigen::VectorXd G;
    bool ok = std::isfinite(out.rcond) && out.rcond >= 1.0 / kMaxCondition;
    if (ok) {
        G = lu.solve(b);
        ok = G.allFinite();
    }
    if (!ok) {
        out.ridge = true;
        const double tr = A.trace();
        out.lambda = tr > 0.0 ? 1e-8 * tr / static_cast<double>(L) : 1e-8;
        Eigen::MatrixXd N = A.transpose() * A;
        N.diagonal().array() += out.lambda;
        G = N.ldlt().solve(A.transpose() * b);
    }
    const double bn = b.norm();
    out.solve_residual = bn > 0.0 ? (A * G - b).norm() / bn : (A * G).norm();
    out.kernel.values.assign(G.data(), G.data() + report_len);
    return out;
}

KernelFit fit_kernel(const TabulatedKernel& tab, const KernelFitWindow& window) {
    const int len = static_cast<int>(tab.size());
    KernelFit out;
    out.first = window.first;
    out.last = window.last > 0 ? window.last : len;
    if (out.first < 1 || out.last > len) throw ParameterError("fit window must lie within 1.." + std::to_string(len));
    if (out.last - out.first + 1 < 5) throw ParameterError("fit window needs at least 5 lags");

    std::vector<double> lags, target;
    double scale = std::abs(tab.at(out.first));
    for (int lag = out.first; lag <= out.last; ++lag) {
        if (!std::isfinite(tab.at(lag))) throw CalibrationError("fit", "non-finite kernel value at lag " + std::to_string(lag));
        scale = std::max(scale, std::abs(tab.at(lag)));
    }
    if (scale == 0.0) scale = 1.0;
    for (int lag = out.first; lag <= out.last; ++lag) {
        lags.push_back(lag);
        target.push_back(tab.at(lag) / scale);
    }

    Eigen::VectorXd p(3);
    p << tab.at(out.first) / scale, std::log(0.5 * (out.first + out.last)), 0.1;
    PowerLawResidual functor(lags, target);
    Eigen::LevenbergMarquardt<PowerLawResidual> lm(functor);
    lm.setXtol(1e-10);
    lm.setFtol(0.0);
    lm.setGtol(0.0);
    lm.setMaxfev(200);
    const auto status = lm.minimize(p);
    out.iterations = static_cast<int>(lm.iterations());
    out.converged = status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation &&
                    status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters && p.allFinite();

    double mean = 0.0;
    for (double t : target) mean += t;
    mean /= static_cast<double>(target.size());
    const PowerLawKernel flat{mean * scale, std::exp(std::log(0.5 * (out.first + out.last))), 0.0};
    const double flat_res = window_residual(flat, tab, out.first, out.last);

    const PowerLawKernel fitted{p[0] * scale, std::exp(p[1]), p[2]};
    const bool usable = p.allFinite() && fitted.gamma0 != 0.0 && fitted.tau0 > 0.0 && fitted.beta >= 0.0 &&
                        std::isfinite(fitted.tau0);
    const double fit_res = usable ? window_residual(fitted, tab, out.first, out.last) : flat_res;
    if (usable && fit_res < flat_res) {
        out.kernel = fitted;
        out.residual_norm = fit_res;
    } else {
        out.kernel = flat;
        out.residual_norm = flat_res;
        if (!usable) out.converged = true;  // the constrained optimum sits on beta = 0
    }
    return out;
}

CalibrationResult calibrate_pair(const BarSeries& bars_i, const BarSeries& bars_j, const CalibrationConfig& config) {
    if (config.cutoff < 1) throw ParameterError("cut-off must be >= 1");
    if (config.report_len < 1 || config.report_len > config.cutoff) {
        throw ParameterError("report length must lie in 1..cut-off");
    }
    if (config.volume_bins < 3) throw ParameterError("need at least 3 volume bins");
    check_aligned(bars_i, bars_j);
    CalibrationResult out;
    out.days = bars_i.size();
    out.seconds = total_seconds(bars_i);
    out.ij = calibrate_direction(bars_i, bars_j, config, "ij");
    out.ji = calibrate_direction(bars_j, bars_i, config, "ji");
    return out;
}

}  // namespace crossimpact
