#pragma once

#include "trey/core/types.hpp"

#include <string>
#include <vector>

namespace trey::core {

// Returns one description per violated Moment invariant; empty means valid.
// Pure: violations are data, not failures.
std::vector<std::string> validate_moment(const Moment& m, const CourtSpec& court);

// Basket the team shoots at in the given period. Throws std::runtime_error on
// an unknown team_id (a corrupt join).
Point attacking_basket(const GameSides& sides, const std::string& team_id, int period,
                       const CourtSpec& court);

}  // namespace trey::core
