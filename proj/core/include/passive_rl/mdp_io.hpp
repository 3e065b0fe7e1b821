#pragma once

#include "passive_rl/mdp.hpp"

#include <filesystem>
#include <iosfwd>

namespace passive_rl {

// Line-oriented MDP text format:
//
//   # comment
//   states N
//   actions M
//   gamma G
//   mu0 p_0 ... p_{N-1}
//   trans s a q_0 ... q_{N-1}        one per (s,a)
//   reward s a bernoulli p           or: reward s a det r
//
// Header lines must precede mu0/trans/reward lines.

/// Throws ParseError (with line number) on syntax errors and ValidationError when the
/// parsed tables violate the MDP invariants.
TabularMdp parse_mdp(std::istream& in);
TabularMdp load_mdp(const std::filesystem::path& path);

/// Writes `mdp` in the format above with round-trip precision.
void write_mdp(std::ostream& out, const TabularMdp& mdp);

} // namespace passive_rl
