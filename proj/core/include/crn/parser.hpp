#pragma once

// Text format for mass-action systems (`.crn`):
//
//   file  := line*
//   line  := side arrow side ':' rate (',' rate)?
//   arrow := '->' | '<->'
//   side  := '0' | term ('+' term)*
//   term  := [integer] ident
//   rate  := positive decimal literal
//
// Whitespace is insignificant within a line and `#` starts a comment. `->`
// takes one rate constant, `<->` takes (forward, backward).

#include <string>
#include <string_view>
#include <variant>

#include "crn/model.hpp"

namespace crn {

MassActionSystem parse_network(std::string_view text);

/// Reads and parses a `.crn` file.
MassActionSystem load_network(const std::string& path);

enum class StateKind { Continuous, Discrete };

/// Parses "A=1.5, B=2". Unlisted species are 0.
std::variant<DetState, DiscreteState> parse_state(std::string_view text,
                                                   const SpeciesTable& species,
                                                   StateKind kind);
DetState parse_det_state(std::string_view text, const SpeciesTable& species);
DiscreteState parse_discrete_state(std::string_view text, const SpeciesTable& species);

/// Canonical text; reversible pairs are merged onto one `<->` line.
std::string format_network(const MassActionSystem& sys);

std::string format_state(const DiscreteState& x, const SpeciesTable& species);
std::string format_state(const DetState& c, const SpeciesTable& species);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Equality up to a permutation of the species table.
bool equivalent(const MassActionSystem& a, const MassActionSystem& b);

}  // namespace crn
