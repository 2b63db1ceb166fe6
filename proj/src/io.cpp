#include "crossimpact/io.hpp"

#include "crossimpact/error.hpp"

#include <cmath>
#include <fstream>

namespace crossimpact {

namespace {

const Json& member(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(where + " is missing \"" + key + "\"");
    return *it;
}

double number(const Json& obj, const char* key, const std::string& where) {
    const Json& v = member(obj, key, where);
    if (!v.is_number()) throw ValidationError(where + "." + key + " must be a number");
    return v.get<double>();
}

double number_or(const Json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return number(obj, key, where);
}

Json nullable(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

PowerLawKernel kernel_from(const Json& obj, const std::string& where) {
    PowerLawKernel k{number(obj, "gamma0", where), number(obj, "tau0", where), number(obj, "beta", where)};
    k.validate();
    return k;
}

Json kernel_entry(const PowerLawKernel& k, const VolumeImpact& g) {
    return Json{{"gamma0", k.gamma0}, {"tau0", k.tau0}, {"beta", k.beta}, {"delta", g.delta}};
}

VolumeImpact impact_from(const Json& obj, const std::string& where) {
    VolumeImpact g{number(obj, "delta", where)};
    g.validate();
    return g;
}

SynthFlow flow_from(const Json& obj, const std::string& where) {
    SynthFlow f;
    f.rho = number_or(obj, "rho", f.rho, where);
    f.trade_prob = number_or(obj, "trade_prob", f.trade_prob, where);
    f.log_mu = number_or(obj, "log_mu", f.log_mu, where);
    f.log_sigma = number_or(obj, "log_sigma", f.log_sigma, where);
    f.initial_price = number_or(obj, "initial_price", f.initial_price, where);
    return f;
}

Json flow_to(const SynthFlow& f) {
    return Json{{"rho", f.rho},
                {"trade_prob", f.trade_prob},
                {"log_mu", f.log_mu},
                {"log_sigma", f.log_sigma},
                {"initial_price", f.initial_price}};
}

Json direction_diagnostics(const DirectionCalibration& d) {
    Json tab = Json::array();
    for (double v : d.extraction.kernel.values) tab.push_back(nullable(v));
    Json bins = Json::array();
    for (std::size_t k = 0; k < d.volume_fit.v.size(); ++k) {
        bins.push_back(Json{{"v", d.volume_fit.v[k]}, {"ratio", d.volume_fit.ratio[k]}});
    }
    return Json{
        {"delta", d.delta},
        {"mean_g", d.mean_g},
        {"trading_seconds", d.trading_seconds},
        {"low_sample", d.low_sample},
        {"volume_fit", {{"intercept", d.volume_fit.intercept}, {"residual_rms", d.volume_fit.residual_rms}, {"bins", bins}}},
        {"response_lag1", nullable(d.response.at(1))},
        {"extraction",
         {{"ridge", d.extraction.ridge},
          {"rcond", d.extraction.rcond},
          {"condition_estimate", d.extraction.rcond > 0.0 ? Json(1.0 / d.extraction.rcond) : Json(nullptr)},
          {"lambda", d.extraction.lambda},
          {"solve_residual", d.extraction.solve_residual}}},
        {"fit",
         {{"gamma0", d.fit.kernel.gamma0},
          {"tau0", d.fit.kernel.tau0},
          {"beta", d.fit.kernel.beta},
          {"window", {d.fit.first, d.fit.last}},
          {"residual_norm", d.fit.residual_norm},
          {"iterations", d.fit.iterations},
          {"converged", d.fit.converged}}},
        {"tabulated_kernel", tab},
    };
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open " + path.string());
    try {
        return Json::parse(is);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write " + path.string());
    os << doc.dump(2) << '\n';
    if (!os) throw ValidationError("failed writing " + path.string());
}

ParamsFile params_from_json(const Json& doc) {
    ParamsFile out;
    const Json& pairs = member(doc, "pairs", "params");
    const Json& ij = member(pairs, "ij", "params.pairs");
    const Json& ji = member(pairs, "ji", "params.pairs");
    out.model.G_ij = kernel_from(ij, "params.pairs.ij");
    out.model.g_i = impact_from(ij, "params.pairs.ij");
    out.model.G_ji = kernel_from(ji, "params.pairs.ji");
    out.model.g_j = impact_from(ji, "params.pairs.ji");
    if (doc.contains("self")) {
        const Json& self = doc["self"];
        if (self.contains("ii")) {
            out.G_ii = kernel_from(self["ii"], "params.self.ii");
            out.f_i = impact_from(self["ii"], "params.self.ii");
        }
        if (self.contains("jj")) {
            out.G_jj = kernel_from(self["jj"], "params.self.jj");
            out.f_j = impact_from(self["jj"], "params.self.jj");
        }
    }
    return out;
}

Json params_to_json(const ParamsFile& params) {
    Json doc{{"pairs",
              {{"ij", kernel_entry(params.model.G_ij, params.model.g_i)},
               {"ji", kernel_entry(params.model.G_ji, params.model.g_j)}}}};
    if (params.G_ii || params.G_jj) {
        Json self = Json::object();
        if (params.G_ii) self["ii"] = kernel_entry(*params.G_ii, params.f_i.value_or(VolumeImpact{}));
        if (params.G_jj) self["jj"] = kernel_entry(*params.G_jj, params.f_j.value_or(VolumeImpact{}));
        doc["self"] = self;
    }
    return doc;
}

Presets presets_from_json(const Json& doc) {
    Presets p;
    p.zeta_v = number_or(doc, "zeta_v", p.zeta_v, "presets");
    p.T_i = number_or(doc, "T_i", p.T_i, "presets");
    p.vdot_in_i = number_or(doc, "vdot_in_i", p.vdot_in_i, "presets");
    p.validate();
    return p;
}

Json presets_to_json(const Presets& p) { return Json{{"zeta_v", p.zeta_v}, {"T_i", p.T_i}, {"vdot_in_i", p.vdot_in_i}}; }

StrategyParams strategy_from_json(const Json& doc) {
    StrategyParams s{number(doc, "kappa_i", "strategy"), number(doc, "kappa_j", "strategy"),
                     number(doc, "zeta_T", "strategy")};
    s.validate();
    return s;
}

Json strategy_to_json(const StrategyParams& s) {
    return Json{{"kappa_i", s.kappa_i}, {"kappa_j", s.kappa_j}, {"zeta_T", s.zeta_T}};
}

CostRequest cost_request_from_json(const Json& doc) {
    CostRequest req;
    if (doc.contains("presets")) req.presets = presets_from_json(doc["presets"]);
    req.strategy = strategy_from_json(member(doc, "strategy", "request"));
    req.model = params_from_json(doc).model;
    if (doc.contains("method")) {
        const auto m = doc["method"].get<std::string>();
        if (m == "closed_form") {
            req.options.method = IntegrationMethod::ClosedForm;
        } else if (m == "quadrature") {
            req.options.method = IntegrationMethod::Quadrature;
        } else {
            throw ValidationError("request.method must be \"closed_form\" or \"quadrature\"");
        }
    }
    return req;
}

Json cost_result_to_json(const StrategyParams& strategy, const CrossCost& cost) {
    Json admitted = Json::array();
    for (Region r : cost.region.admitted) admitted.push_back(std::string(region_name(r)));
    return Json{{"strategy", strategy_to_json(strategy)},
                {"omega_ij", cost.omega_ij},
                {"omega_ji", cost.omega_ji},
                {"omega_c", cost.omega_c},
                {"omega_c_x1e6", cost.omega_c_scaled()},
                {"region", std::string(region_name(cost.region.region))},
                {"on_boundary", cost.region.on_boundary},
                {"admitted_regions", admitted}};
}

Json surface_to_json(const CostSurface& surface) {
    Json cells = Json::array();
    for (const auto& c : surface.cells) {
        Json cell{{"kappa_i", c.kappa_i}, {"kappa_j", c.kappa_j}, {"feasible", c.feasible}};
        if (c.feasible) {
            cell["region"] = std::string(region_name(c.region));
            cell["on_boundary"] = c.on_boundary;
            cell["omega_c"] = c.omega_c;
            cell["omega_c_x1e6"] = c.omega_c_scaled();
        } else {
            cell["region"] = nullptr;
            cell["omega_c"] = nullptr;
            cell["omega_c_x1e6"] = nullptr;
        }
        cells.push_back(std::move(cell));
    }
    return Json{{"zeta_T", surface.zeta_T}, {"steps", surface.steps}, {"cells", cells}};
}

Json optimal_to_json(const OptimalStrategy& best) {
    return Json{{"strategy", strategy_to_json(best.params)},
                {"omega_c", best.omega_c},
                {"omega_c_x1e6", best.omega_c * 1e6},
                {"region", std::string(region_name(best.region))}};
}

ParamsFile calibrated_params(const CalibrationResult& result) {
    ParamsFile p;
    p.model.G_ij = result.ij.fit.kernel;
    p.model.g_i = VolumeImpact{result.ij.delta};
    p.model.G_ji = result.ji.fit.kernel;
    p.model.g_j = VolumeImpact{result.ji.delta};
    return p;
}

Json calibration_diagnostics(const CalibrationResult& result, const CalibrationConfig& config) {
    return Json{{"days", result.days},
                {"seconds", result.seconds},
                {"cutoff", config.cutoff},
                {"report_len", config.report_len},
                {"weight", config.weight},
                {"ij", direction_diagnostics(result.ij)},
                {"ji", direction_diagnostics(result.ji)}};
}

SynthConfig synth_config_from_json(const Json& doc) {
    SynthConfig c;
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) throw ValidationError("synth.seed must be an integer");
        c.seed = doc["seed"].get<std::uint64_t>();
    }
    c.days = static_cast<int>(number_or(doc, "days", c.days, "synth"));
    c.seconds_per_day = static_cast<int>(number_or(doc, "seconds_per_day", c.seconds_per_day, "synth"));
    c.first_second = static_cast<int>(number_or(doc, "first_second", c.first_second, "synth"));
    c.noise_sigma = number_or(doc, "noise_sigma", c.noise_sigma, "synth");
    if (doc.contains("flow_i")) c.flow_i = flow_from(doc["flow_i"], "synth.flow_i");
    if (doc.contains("flow_j")) c.flow_j = flow_from(doc["flow_j"], "synth.flow_j");
    const auto params = params_from_json(doc);
    c.G_ij = params.model.G_ij;
    c.G_ji = params.model.G_ji;
    c.g_i = params.model.g_i;
    c.g_j = params.model.g_j;
    c.G_ii = params.G_ii;
    c.G_jj = params.G_jj;
    if (params.f_i) c.f_i = *params.f_i;
    if (params.f_j) c.f_j = *params.f_j;
    c.validate();
    return c;
}

Json synth_config_to_json(const SynthConfig& c) {
    ParamsFile p;
    p.model = {c.G_ij, c.G_ji, c.g_i, c.g_j};
    p.G_ii = c.G_ii;
    p.G_jj = c.G_jj;
    if (c.G_ii) p.f_i = c.f_i;
    if (c.G_jj) p.f_j = c.f_j;
    Json doc{{"seed", c.seed},
             {"days", c.days},
             {"seconds_per_day", c.seconds_per_day},
             {"first_second", c.first_second},
             {"noise_sigma", c.noise_sigma},
             {"flow_i", flow_to(c.flow_i)},
             {"flow_j", flow_to(c.flow_j)}};
    const Json pairs = params_to_json(p);
    for (const auto& [k, v] : pairs.items()) doc[k] = v;
    return doc;
}

Json synth_truth_json(const SynthConfig& config, const SynthCorpus& corpus) {
    Json doc = synth_config_to_json(config);
    doc["realized"] = {{"mean_g_i", corpus.mean_g_i},
                       {"mean_g_j", corpus.mean_g_j},
                       {"sign_correlation_lag1_i", synth_sign_correlation(config.flow_i, 1)},
                       {"sign_correlation_lag1_j", synth_sign_correlation(config.flow_j, 1)}};
    return doc;
}

}  // namespace crossimpact
