#pragma once

// JSON interchange for MDPs:
//
//   { "n": 3, "gamma": 1.0, "exit_states": [2],
//     "actions": [ { "id": "a", "rows": [[s, s', p], ...],
//                    "rewards": [[s, r], ...], "available": [s, ...] } ] }
//
// Probabilities are the discounted entries. Doubles are written in shortest
// round-trip form, so save followed by load is value-exact.

#include <iosfwd>
#include <string>

#include "oomi/mdp.hpp"

namespace oomi {

std::string mdp_to_json(const Mdp& mdp, int indent = -1);
Mdp mdp_from_json(const std::string& text);

void save_mdp(const Mdp& mdp, std::ostream& out);
Mdp load_mdp(std::istream& in);

}  // namespace oomi
