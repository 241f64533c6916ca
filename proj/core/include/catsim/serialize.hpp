#pragma once

#include <string>

#include <json.hpp>

#include "catsim/cstate.hpp"

namespace catsim {

// {"modes": M, "terms": [{"coeff_re", "coeff_im", "amps": [[re, im], ...]}, ...]}
nlohmann::json to_json(const CoherentSuperposition& s);
CoherentSuperposition state_from_json(const nlohmann::json& j);

std::string dump_state(const CoherentSuperposition& s);
CoherentSuperposition parse_state(const std::string& text);

}  // namespace catsim
