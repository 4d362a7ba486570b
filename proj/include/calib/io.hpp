#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "calib/constructions.hpp"
#include "calib/experiments.hpp"
#include "calib/losses.hpp"
#include "calib/omni.hpp"
#include "calib/pld.hpp"
#include "calib/postprocessing.hpp"
#include "calib/smoothing.hpp"
#include "calib/transport.hpp"

namespace calib::io {

using Json = nlohmann::ordered_json;

// Parsers throw calib::Error with ParseError (or the validation code of the
// object being built) on malformed input, including non-finite numbers.
Pld pld_from_json(const Json& j);
FinitePredictionTask task_from_json(const Json& j);
VMixtureLoss loss_from_json(const Json& j);
PostProcessing postprocessing_from_json(const Json& j);

Json to_json(const Pld& pld);
Json to_json(const FinitePredictionTask& task);
Json to_json(const VMixtureLoss& loss);
Json to_json(const PostProcessing& kappa);
Json to_json(const CouplingTable& coupling);
Json to_json(const Companion& companion);
Json to_json(const TransportResult& result);
Json to_json(const PiecewisePrediction& law);
Json to_json(const PosteriorFunction& post);
Json to_json(const OmniReport& report);
Json to_json(const SampleSet& samples);
Json to_json(const DistinguishReport& report);

Json read_json_file(const std::filesystem::path& path);

// Serializes with every floating-point number printed to 17 significant digits.
std::string dump(const Json& j, int indent = 2);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace calib::io
