#pragma once

// JSON documents exchanged by the command-line tools. Field names are listed
// in README.md.

#include "crossimpact/calibration.hpp"
#include "crossimpact/execution.hpp"
#include "crossimpact/optimizer.hpp"
#include "crossimpact/synth.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace crossimpact {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

/// Parameter file:
///   {"pairs": {"ij": {"gamma0", "tau0", "beta", "delta"}, "ji": {...}},
///    "self": {"ii": {...}, "jj": {...}}}      ("self" optional)
struct ParamsFile {
    PairModel model;
    std::optional<PowerLawKernel> G_ii;
    std::optional<PowerLawKernel> G_jj;
    std::optional<VolumeImpact> f_i;
    std::optional<VolumeImpact> f_j;
};

ParamsFile params_from_json(const Json& doc);
Json params_to_json(const ParamsFile& params);

Presets presets_from_json(const Json& doc);
Json presets_to_json(const Presets& presets);

StrategyParams strategy_from_json(const Json& doc);
Json strategy_to_json(const StrategyParams& params);

/// {"presets": {...}, "strategy": {...}, "pairs": {...}, "method": "closed_form" | "quadrature"}
struct CostRequest {
    Presets presets;
    StrategyParams strategy;
    PairModel model;
    CostOptions options;
};

CostRequest cost_request_from_json(const Json& doc);
Json cost_result_to_json(const StrategyParams& strategy, const CrossCost& cost);

Json surface_to_json(const CostSurface& surface);
Json optimal_to_json(const OptimalStrategy& best);

/// Parameter file built from a calibration (the fitted power laws).
ParamsFile calibrated_params(const CalibrationResult& result);
Json calibration_diagnostics(const CalibrationResult& result, const CalibrationConfig& config);

SynthConfig synth_config_from_json(const Json& doc);
Json synth_config_to_json(const SynthConfig& config);
Json synth_truth_json(const SynthConfig& config, const SynthCorpus& corpus);

}  // namespace crossimpact
