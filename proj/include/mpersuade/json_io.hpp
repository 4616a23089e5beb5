#pragma once

// JSON fragments for objectives, priors and media environments, and the
// fixed number formatting used in every emitted report.

#include <string>
#include <string_view>

#include <json.hpp>

#include "mpersuade/censorship.hpp"
#include "mpersuade/objective.hpp"
#include "mpersuade/prior.hpp"

namespace mpersuade::json_io {

using Json = nlohmann::ordered_json;

// Every parser throws ConfigInvalid naming the offending field, prefixed by
// path (e.g. "prior.probs: probs sum to 0.9, expected 1").
ObjectiveFn parse_objective(const Json& j, const std::string& path = "objective");
Prior parse_prior(const Json& j, const std::string& path = "prior");
ContinuousPrior parse_continuous_prior(const Json& j, const std::string& path);
MediaEnvironment parse_environment(const Json& j, const std::string& path = "environment");

// Rounded to 12 significant digits; non-finite values become null.
Json number(double x);
// The same rounding as text, for CSV cells.
std::string format_number(double x);

}  // namespace mpersuade::json_io
