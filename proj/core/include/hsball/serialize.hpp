#pragma once

#include <string>

#include "hsball/boundary.hpp"
#include "hsball/polyfn.hpp"

namespace hsball {

// JSON object {"n":..., "cap":..., "terms":[{"alpha":[...],"re":...,"im":...}]}
// in graded-lexicographic term order (byte-stable).
std::string to_json_string(const PolyFn& f);
PolyFn polyfn_from_json_string(const std::string& text);

// JSON object {"value":..., "stderr":..., "mode":..., "per_j":[...]}.
std::string to_json_string(const NormReport& report);

}  // namespace hsball
