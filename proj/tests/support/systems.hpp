#pragma once

// The worked networks used across the suites, as DSL text.

#include <string_view>

#include "crn/parser.hpp"

namespace crn::testing {

inline constexpr std::string_view kIntro = "A + B <-> 2C : 1, 2\nA <-> B : 3, 4\n";
inline constexpr std::string_view kIntroWegscheider = "A + B <-> 2C : 1, 1\nA <-> B : 1, 1\n";

// 2 one way round the square, 1 the other
inline constexpr std::string_view kSquare =
    "3A <-> 2A + B : 2, 1\n2A + B <-> 3B : 2, 1\n3B <-> A + 2B : 2, 1\nA + 2B <-> 3A : 2, 1\n";

inline constexpr std::string_view kTriangle =
    "2A -> A + B : 1\n2A -> 2B : 1\nA + B -> 2B : 2\nA + B -> 2A : 2\n2B -> 2A : 1\n2B -> A + B : 1\n";

inline constexpr std::string_view kThreeRvb = "0 <-> A : 6, 11\n2A <-> 3A : 6, 1\n";

inline constexpr std::string_view kAcr = "A + B -> 2B : 1\nB -> A : 1\n";

inline constexpr std::string_view kStochRvb =
    "0 -> A : 1\n0 -> 2A : 2\nA -> 0 : 1\nA -> 3A : 4\nA -> 2A : 1\n"
    "3A -> A : 12\n2A -> A : 2\n2A -> 0 : 3\n2A -> 4A : 1\n4A -> 2A : 4\n";

inline constexpr std::string_view kBirthDeath = "0 <-> A : 0.5, 1\n2A <-> 3A : 1, 3\n";

inline constexpr std::string_view kSixComplex =
    "A -> 0 : 2\n0 -> B : 2\nB -> A : 2\n0 -> A : 1\nB -> 0 : 1\nA -> B : 1\n"
    "A + C -> B + C : 2\nB + C -> C : 2\nC -> A + C : 2\n"
    "B + C -> A + C : 1\nC -> B + C : 1\nA + C -> C : 1\n";

inline constexpr std::string_view kPoisson = "0 <-> A : 1, 1\n";
inline constexpr std::string_view kIsomer = "A <-> B : 1, 1\n";

inline MassActionSystem system_of(std::string_view text) { return parse_network(text); }

}  // namespace crn::testing
