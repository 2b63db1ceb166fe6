#include "crossimpact/execution.hpp"

#include "crossimpact/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace crossimpact {

namespace {

constexpr double kTieTolerance = 1e-12;

bool leq(double x, double y) { return x <= y + kTieTolerance * std::max({1.0, std::abs(x), std::abs(y)}); }

struct Phases {
    double buy_rate;   // signed own rate during the first phase
    double sell_rate;  // signed own rate during the second phase
    double switch_time;
    double end;
};

Phases phases(const StockSchedule& s) {
    return {s.direction * s.vdot_in, -s.direction * s.vdot_out, s.switch_time(), s.T};
}

void require_region(const ResolvedSchedule& sched, Region region) {
    if (!region_admits(sched.params, region)) {
        throw ConsistencyError("region " + std::string(region_name(region)) +
                               " does not admit the schedule's strategy parameters");
    }
}

}  // namespace

void StrategyParams::validate() const {
    if (!(kappa_i > 0.0 && kappa_i < 1.0)) throw ParameterError("kappa_i must lie in (0, 1), got " + std::to_string(kappa_i));
    if (!(kappa_j > 0.0 && kappa_j < 1.0)) throw ParameterError("kappa_j must lie in (0, 1), got " + std::to_string(kappa_j));
    if (!(zeta_T > 0.0) || !std::isfinite(zeta_T)) throw ParameterError("zeta_T must be positive, got " + std::to_string(zeta_T));
}

void Presets::validate() const {
    if (!(zeta_v > 0.0) || !std::isfinite(zeta_v)) throw ParameterError("zeta_v must be positive");
    if (!(T_i > 0.0) || !std::isfinite(T_i)) throw ParameterError("T_i must be positive");
    if (!(vdot_in_i > 0.0) || !std::isfinite(vdot_in_i)) throw ParameterError("vdot_in_i must be positive");
}

RateProfile StockSchedule::rates() const {
    const auto p = phases(*this);
    return {{0.0, p.switch_time, p.buy_rate}, {p.switch_time, p.end, p.sell_rate}};
}

ResolvedSchedule resolve_schedule(const Presets& presets, const StrategyParams& params) {
    presets.validate();
    params.validate();
    const double ki = params.kappa_i;
    const double kj = params.kappa_j;

    ResolvedSchedule out;
    out.params = params;

    auto& si = out.i;
    si.T = presets.T_i;
    si.theta = 1.0 - ki;
    si.vdot = presets.vdot_in_i / ki;
    si.vdot_in = presets.vdot_in_i;
    si.vdot_out = (1.0 - ki) * si.vdot;

    const double rate_ratio = (presets.zeta_v / params.zeta_T) * ((1.0 - kj) * kj) / ((1.0 - ki) * ki);
    auto& sj = out.j;
    sj.T = presets.T_i / params.zeta_T;
    sj.theta = 1.0 - kj;
    sj.vdot = si.vdot / rate_ratio;
    sj.vdot_in = kj * sj.vdot;
    sj.vdot_out = (1.0 - kj) * sj.vdot;
    return out;
}

std::string_view region_name(Region r) noexcept {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        case Region::IV: return "IV";
    }
    return "?";
}

Region region_from_name(std::string_view name) {
    if (name == "I") return Region::I;
    if (name == "II") return Region::II;
    if (name == "III") return Region::III;
    if (name == "IV") return Region::IV;
    throw ParameterError("unknown region '" + std::string(name) + "'");
}

bool region_admits(const StrategyParams& p, Region region) {
    const double zeta = p.zeta_T;
    const double theta_i = 1.0 - p.kappa_i;
    const double theta_j = 1.0 - p.kappa_j;
    switch (region) {
        case Region::I: return leq(theta_j / theta_i, zeta) && leq(zeta, 1.0 / theta_i);
        case Region::II: return leq(1.0 / theta_i, zeta);
        case Region::III: return leq(theta_j, zeta) && leq(zeta, theta_j / theta_i);
        case Region::IV: return zeta > 0.0 && leq(zeta, theta_j);
    }
    return false;
}

RegionInfo classify_region(const StrategyParams& params) {
    params.validate();
    RegionInfo info;
    for (Region r : {Region::I, Region::II, Region::III, Region::IV}) {
        if (region_admits(params, r)) info.admitted.push_back(r);
    }
    if (info.admitted.empty()) throw EmptyDomainError("no region admits the strategy parameters");
    info.region = info.admitted.front();
    info.on_boundary = info.admitted.size() > 1;
    return info;
}

void PairModel::validate() const {
    G_ij.validate();
    G_ji.validate();
    g_i.validate();
    g_j.validate();
}

std::vector<CostTerm> cross_cost_terms_ij(const ResolvedSchedule& sched, Region region, const VolumeImpact& g_i) {
    const auto own = phases(sched.i);
    const auto other = phases(sched.j);
    const double ti = own.switch_time, Ti = own.end;
    const double tj = other.switch_time;
    const double buy_imp = g_i.signed_eval(other.buy_rate);
    const double sell_imp = g_i.signed_eval(other.sell_rate);

    switch (region) {
        case Region::I:
        case Region::II:
            return {{own.buy_rate, buy_imp, {0.0, ti, 0.0, tj}},
                    {own.buy_rate, sell_imp, {0.0, ti, tj, ti}},
                    {own.sell_rate, buy_imp, {ti, Ti, 0.0, tj}},
                    {own.sell_rate, sell_imp, {ti, Ti, tj, Ti}}};
        case Region::III:
            return {{own.buy_rate, buy_imp, {0.0, ti, 0.0, ti}},
                    {own.sell_rate, buy_imp, {ti, Ti, 0.0, tj}},
                    {own.sell_rate, sell_imp, {ti, Ti, tj, Ti}}};
        case Region::IV:
            return {{own.buy_rate, buy_imp, {0.0, ti, 0.0, ti}},
                    {own.sell_rate, buy_imp, {ti, Ti, 0.0, Ti}}};
    }
    return {};
}

std::vector<CostTerm> cross_cost_terms_ji(const ResolvedSchedule& sched, Region region, const VolumeImpact& g_j) {
    const auto own = phases(sched.j);
    const auto other = phases(sched.i);
    const double tj = own.switch_time, Tj = own.end;
    const double ti = other.switch_time;
    const double buy_imp = g_j.signed_eval(other.buy_rate);
    const double sell_imp = g_j.signed_eval(other.sell_rate);

    switch (region) {
        case Region::I:
            return {{own.buy_rate, buy_imp, {0.0, tj, 0.0, tj}},
                    {own.sell_rate, buy_imp, {tj, Tj, 0.0, ti}},
                    {own.sell_rate, sell_imp, {tj, Tj, ti, Tj}}};
        case Region::II:
            return {{own.buy_rate, buy_imp, {0.0, tj, 0.0, tj}},
                    {own.sell_rate, buy_imp, {tj, Tj, 0.0, Tj}}};
        case Region::III:
        case Region::IV:
            return {{own.buy_rate, buy_imp, {0.0, tj, 0.0, ti}},
                    {own.buy_rate, sell_imp, {0.0, tj, ti, tj}},
                    {own.sell_rate, buy_imp, {tj, Tj, 0.0, ti}},
                    {own.sell_rate, sell_imp, {tj, Tj, ti, Tj}}};
    }
    return {};
}

double evaluate_terms(const std::vector<CostTerm>& terms, const PowerLawKernel& kernel, const CostOptions& opts) {
    auto quadrature = [&] {
        const GaussLegendre rule(opts.quadrature_order);
        double sum = 0.0;
        for (const auto& term : terms) {
            if (term.own_rate == 0.0 || term.impact == 0.0) continue;
            sum += term.own_rate * term.impact * causal_box_quadrature(kernel, term.box, rule);
        }
        return sum;
    };
    if (opts.method == IntegrationMethod::Quadrature) return quadrature();

    double sum = 0.0;
    for (const auto& term : terms) {
        if (term.own_rate == 0.0 || term.impact == 0.0) continue;
        sum += term.own_rate * term.impact * kernel_double_primitive(kernel, term.box);
    }
    return std::isfinite(sum) ? sum : quadrature();
}

double cross_cost_ij(const ResolvedSchedule& sched, Region region, const PowerLawKernel& G_ij,
                     const VolumeImpact& g_i, const CostOptions& opts) {
    require_region(sched, region);
    return evaluate_terms(cross_cost_terms_ij(sched, region, g_i), G_ij, opts);
}

double cross_cost_ji(const ResolvedSchedule& sched, Region region, const PowerLawKernel& G_ji,
                     const VolumeImpact& g_j, const CostOptions& opts) {
    require_region(sched, region);
    return evaluate_terms(cross_cost_terms_ji(sched, region, g_j), G_ji, opts);
}

CrossCost cross_cost_total(const ResolvedSchedule& sched, const PairModel& model, const CostOptions& opts) {
    CrossCost out;
    out.region = classify_region(sched.params);
    out.omega_ij = cross_cost_ij(sched, out.region.region, model.G_ij, model.g_i, opts);
    out.omega_ji = cross_cost_ji(sched, out.region.region, model.G_ji, model.g_j, opts);
    out.omega_c = out.omega_ij + out.omega_ji;
    return out;
}

CrossCost cross_cost_total(const Presets& presets, const StrategyParams& params, const PairModel& model,
                           const CostOptions& opts) {
    model.validate();
    return cross_cost_total(resolve_schedule(presets, params), model, opts);
}

double self_cost(const StockSchedule& sched, const PowerLawKernel& G_ii, const VolumeImpact& f_i,
                 const CostOptions& opts) {
    if (!(sched.T > 0.0) || !(sched.theta > 0.0 && sched.theta < 1.0)) {
        throw ParameterError("self cost needs T > 0 and 0 < theta < 1");
    }
    if (!(sched.vdot_in > 0.0) || !(sched.vdot_out > 0.0)) throw ParameterError("self cost needs positive rates");
    G_ii.validate();
    const auto p = phases(sched);
    const double t = p.switch_time, T = p.end;
    const double buy_imp = f_i.signed_eval(p.buy_rate);
    const double sell_imp = f_i.signed_eval(p.sell_rate);
    const std::vector<CostTerm> terms{{p.buy_rate, buy_imp, {0.0, t, 0.0, t}},
                                      {p.sell_rate, buy_imp, {t, T, 0.0, t}},
                                      {p.sell_rate, sell_imp, {t, T, t, T}}};
    return evaluate_terms(terms, G_ii, opts);
}

}  // namespace crossimpact
