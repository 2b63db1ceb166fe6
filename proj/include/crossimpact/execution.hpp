#pragma once

#include "crossimpact/kernels.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace crossimpact {

/// The free strategy triple. kappa_s is the fraction of stock s's total rate
/// spent buying; zeta_T = T_i / T_j.
struct StrategyParams {
    double kappa_i = 0.5;
    double kappa_j = 0.5;
    double zeta_T = 1.0;

    /// Throws ParameterError unless 0 < kappa < 1 and zeta_T > 0.
    void validate() const;
};

/// Quantities fixed before the strategy is chosen.
struct Presets {
    double zeta_v = 1.0;     // total bought volume ratio v_i / v_j
    double T_i = 1.0;        // trading period of stock i
    double vdot_in_i = 0.1;  // buy rate of stock i, normalized volume per unit time

    void validate() const;
};

/// One stock's round trip: buy at vdot_in over [0, theta*T), then sell at
/// vdot_out over [theta*T, T). direction = -1 mirrors it into sell-then-buy.
struct StockSchedule {
    double T = 1.0;
    double theta = 0.5;
    double vdot = 0.0;
    double vdot_in = 0.0;
    double vdot_out = 0.0;
    int direction = +1;

    double switch_time() const noexcept { return theta * T; }
    double bought_volume() const noexcept { return vdot_in * theta * T; }
    /// Net signed volume over [0, T]; zero for a valid round trip.
    double net_volume() const noexcept { return vdot_in * theta * T - vdot_out * (1.0 - theta) * T; }
    /// Signed rate profile over [0, T).
    RateProfile rates() const;
};

struct ResolvedSchedule {
    StrategyParams params;
    StockSchedule i;
    StockSchedule j;
};

ResolvedSchedule resolve_schedule(const Presets& presets, const StrategyParams& params);

/// Time orderings of the two stocks' phase boundaries.
///   I:   theta_j T_j <= theta_i T_i <= T_j
///   II:  T_j <= theta_i T_i
///   III: theta_i T_i <= theta_j T_j <= T_i
///   IV:  T_i <= theta_j T_j
enum class Region { I = 1, II = 2, III = 3, IV = 4 };

std::string_view region_name(Region r) noexcept;
Region region_from_name(std::string_view name);

struct RegionInfo {
    Region region = Region::I;
    /// True when a second region's inequality chain also holds (a tie).
    bool on_boundary = false;
    /// Every region whose chain holds, lowest first.
    std::vector<Region> admitted;
};

/// True if the region's inequality chain holds for params (ties within a
/// relative tolerance of 1e-12 count as holding).
bool region_admits(const StrategyParams& params, Region region);

/// Ties resolve to the lowest-numbered admitting region. Throws
/// EmptyDomainError if no chain holds, which cannot happen for valid params.
RegionInfo classify_region(const StrategyParams& params);

/// Cross-impact model for an ordered pair. "ij" is the impact of stock j's
/// trades on stock i's price: kernel G_ij and volume impact g_i(v_j).
struct PairModel {
    PowerLawKernel G_ij;
    PowerLawKernel G_ji;
    VolumeImpact g_i;
    VolumeImpact g_j;

    void validate() const;
};

enum class IntegrationMethod { ClosedForm, Quadrature };

struct CostOptions {
    IntegrationMethod method = IntegrationMethod::ClosedForm;
    int quadrature_order = 64;
};

/// One double-integral term of a cost: own_rate * impact * the causal box
/// integral of the kernel.
struct CostTerm {
    double own_rate = 0.0;
    double impact = 0.0;
    CausalBox box;
};

/// The region's expansion of Omega_ij as a list of terms, with the written
/// integration limits of each term.
std::vector<CostTerm> cross_cost_terms_ij(const ResolvedSchedule& sched, Region region, const VolumeImpact& g_i);
std::vector<CostTerm> cross_cost_terms_ji(const ResolvedSchedule& sched, Region region, const VolumeImpact& g_j);

double evaluate_terms(const std::vector<CostTerm>& terms, const PowerLawKernel& kernel, const CostOptions& opts = {});

/// Cost of stock i's round trip from stock j's cross-impact. Throws
/// ConsistencyError if region does not admit the schedule's params.
double cross_cost_ij(const ResolvedSchedule& sched, Region region, const PowerLawKernel& G_ij,
                     const VolumeImpact& g_i, const CostOptions& opts = {});
double cross_cost_ji(const ResolvedSchedule& sched, Region region, const PowerLawKernel& G_ji,
                     const VolumeImpact& g_j, const CostOptions& opts = {});

struct CrossCost {
    double omega_ij = 0.0;
    double omega_ji = 0.0;
    double omega_c = 0.0;
    RegionInfo region;

    double omega_c_scaled() const noexcept { return omega_c * 1e6; }
};

CrossCost cross_cost_total(const Presets& presets, const StrategyParams& params, const PairModel& model,
                           const CostOptions& opts = {});
/// Same, on an already resolved (possibly direction-flipped) schedule.
CrossCost cross_cost_total(const ResolvedSchedule& sched, const PairModel& model, const CostOptions& opts = {});

/// Self-impact cost of a single round trip.
double self_cost(const StockSchedule& sched, const PowerLawKernel& G_ii, const VolumeImpact& f_i,
                 const CostOptions& opts = {});

}  // namespace crossimpact
