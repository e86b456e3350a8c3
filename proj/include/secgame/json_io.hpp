#pragma once

#include <string>

#include "json.hpp"

#include "secgame/model.hpp"

namespace secgame {

// JSON (de)serialization for game specs, equilibria and verification
// reports. Schemas are documented in docs/spec-schema.md.

nlohmann::json spec_to_json(const GameSpec& spec);
GameSpec spec_from_json(const nlohmann::json& j);

nlohmann::json equilibrium_to_json(const Equilibrium& eq, unsigned seed = 0);
Equilibrium equilibrium_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const VerificationReport& rep, unsigned seed = 0);

GameSpec load_spec(const std::string& path);
Equilibrium load_equilibrium(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace secgame
