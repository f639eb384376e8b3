#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string_view>

#include "moran/config_chain.hpp"
#include "moran/model.hpp"
#include "moran/monte_carlo.hpp"

namespace moran {

using Json = nlohmann::ordered_json;

/// Block attached to every output file: tool name, version, RNG algorithm, command.
Json metadata_json(std::string_view command);

Json model_json(const ModelConfig& config);

/// Chain, stationary law, moments and limit coefficients. Rationals are "p/q"
/// strings; floats keep full precision.
Json exact_report_json(const LumpedChain& chain, const StationaryResult& stationary);

/// `replicate,seed,j,M_inf,extinct,converged,steps`, preceded by `# key=value`
/// metadata lines. Replicates and ancestors are 1-based.
void write_samples_csv(std::ostream& out, const SampleSet& samples);

Json summary_json(const SampleSet& samples, const Summary& summary, const LayerReport& layers);

}  // namespace moran
