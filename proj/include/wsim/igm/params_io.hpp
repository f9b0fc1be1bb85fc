#pragma once

#include "wsim/igm/models.hpp"

#include <json.hpp>

namespace wsim::igm {

// JSON layout: {"equation", "kind": "binary"|"multinomial"|"level",
// "covariates": [tokens], "names": [columns], "coef": ..., "std_errors": ...},
// plus "outcomes" for multinomial (coef is one array per outcome) and
// "residual_sd" for level equations.

nlohmann::json to_json(const BinaryModelParams &p);
nlohmann::json to_json(const MultinomialModelParams &p);
nlohmann::json to_json(const LevelModelParams &p);

/// Throw ConfigError on malformed input or violated parameter invariants.
BinaryModelParams binary_from_json(const nlohmann::json &j);
MultinomialModelParams multinomial_from_json(const nlohmann::json &j);
LevelModelParams level_from_json(const nlohmann::json &j);

} // namespace wsim::igm
