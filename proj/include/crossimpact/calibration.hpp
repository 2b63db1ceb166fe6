#pragma once

#include "crossimpact/kernels.hpp"
#include "crossimpact/microstructure.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace crossimpact {

struct VolumeFitWindow {
    double v_min = 0.0;  // exclusive
    double v_max = 1.0;  // inclusive
    std::size_t min_samples = 50;
};

struct VolumeImpactFit {
    double delta = 0.0;
    double intercept = 0.0;   // log of the fitted curve / R(1) at v = 1
    double residual_rms = 0.0;
    std::vector<double> v;     // bin coordinates used
    std::vector<double> ratio; // curve / R(1) at those bins
};

/// OLS slope of log(curve / r1) against log(bin center) over bins whose
/// center lies in the window, hold enough samples, and have a positive ratio.
/// Throws CalibrationError("volume_impact") with fewer than three such bins.
VolumeImpactFit fit_volume_impact(const ConditionalResponse& curve, double r1, const VolumeFitWindow& window = {});

/// Mean of v^delta over the entries with v > 0. Throws CalibrationError when
/// there are none.
double mean_volume_impact(std::span<const double> volumes, double delta);
double mean_volume_impact(const BarSeries& bars, double delta);

/// A(tau, tau') = Theta(tau - tau') - Theta(tau') for tau, tau' = 1..L.
Eigen::MatrixXd build_sign_matrix(const SignCorrelator& theta, int L);

struct KernelExtraction {
    TabulatedKernel kernel;
    bool ridge = false;        // the Tikhonov fallback was used
    double rcond = 0.0;        // reciprocal condition estimate of A
    double lambda = 0.0;       // ridge strength when used
    double solve_residual = 0.0;  // |A G - b| / |b|
};

/// Solves A G = (w / mean_g) R on lags 1..L and keeps the first report_len
/// entries. Falls back to (A^T A + lambda I) G = A^T b with
/// lambda = 1e-8 trace(A) / L when A is singular or rcond < 1e-12.
KernelExtraction extract_kernel(const ResponseCurve& R, const Eigen::MatrixXd& A, double mean_g, double w,
                                int report_len);

struct KernelFitWindow {
    int first = 10;
    int last = 0;  // 0 means the table length
};

struct KernelFit {
    PowerLawKernel kernel;
    int first = 0;
    int last = 0;
    double residual_norm = 0.0;  // |model - tab| over the window
    int iterations = 0;
    bool converged = false;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) fit of the power law over the
/// window, parameterized as (gamma0, log tau0, beta). Starts at
/// gamma0 = tab(first), tau0 = window midpoint, beta = 0.1 and stops on a
/// relative step below 1e-10 or 200 evaluations. A flat kernel replaces the
/// result when it fits at least as well or the fit wanders to beta < 0.
KernelFit fit_kernel(const TabulatedKernel& tab, const KernelFitWindow& window = {});

struct CalibrationConfig {
    int cutoff = 3000;
    int report_len = 300;
    KernelFitWindow fit_window{10, 0};
    int volume_bins = 20;
    VolumeFitWindow volume_window{};
    double weight = 1.0;
};

/// Everything measured for the impact of stock `source` on stock `target`.
struct DirectionCalibration {
    double delta = 0.0;
    double mean_g = 0.0;
    VolumeImpactFit volume_fit;
    ResponseCurve response;
    KernelExtraction extraction;
    KernelFit fit;
    std::size_t trading_seconds = 0;  // seconds with a nonzero source sign
    bool low_sample = false;
};

struct CalibrationResult {
    DirectionCalibration ij;  // stock j's trades acting on stock i
    DirectionCalibration ji;
    std::size_t days = 0;
    std::size_t seconds = 0;
};

/// Full chain in both directions. Stage failures surface as CalibrationError
/// whose stage() names the direction and step, e.g. "ij/response".
CalibrationResult calibrate_pair(const BarSeries& bars_i, const BarSeries& bars_j, const CalibrationConfig& config = {});

}  // namespace crossimpact
