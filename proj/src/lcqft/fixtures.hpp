#pragma once

#include <string>

namespace lcqft::fixtures {

// Bundled defaults: the regression baseline for the `all` subcommand and the
// examples shipped under fixtures/.
const char* default_spacetime();
const char* default_kappa();
const char* so3_model();
const char* abelian_model();
const char* sabotage_model();
const char* default_category();
const char* default_candidates();

}  // namespace lcqft::fixtures
