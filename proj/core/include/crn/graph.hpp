#pragma once

// Structural analysis of the reaction graph (complexes as nodes, reactions
// as directed edges).

#include <cstddef>
#include <span>
#include <vector>

#include "crn/model.hpp"

namespace crn {

struct LinkagePartition {
  std::vector<std::vector<std::size_t>> classes;  // sorted complex indices
  std::vector<std::size_t> class_of;              // complex -> class

  std::size_t size() const noexcept { return classes.size(); }
};

LinkagePartition linkage_classes(const ReactionNetwork& net);

/// Strongly connected components of a digraph given by adjacency lists.
/// Component ids are assigned in order of each component's smallest vertex.
std::vector<std::size_t> strong_components(const std::vector<std::vector<std::size_t>>& adj,
                                           std::size_t* count = nullptr);

bool is_reversible(const ReactionNetwork& net);
bool is_weakly_reversible(const ReactionNetwork& net);

/// m - l - s. Throws EmptyNetwork for the empty network.
int deficiency(const ReactionNetwork& net);

/// A directed simple cycle y_1 -> ... -> y_j -> y_1 over distinct complexes,
/// rotated so the smallest complex index comes first.
struct DirectedCycle {
  std::vector<std::size_t> complexes;

  std::size_t length() const noexcept { return complexes.size(); }
  friend auto operator<=>(const DirectedCycle&, const DirectedCycle&) = default;
  friend bool operator==(const DirectedCycle&, const DirectedCycle&) = default;
};

struct CycleOptions {
  std::size_t min_len = 3;
  std::size_t max_cycles = 1'000'000;
};

/// All directed simple cycles of length >= min_len (Johnson's algorithm),
/// sorted. Throws CycleBudgetExceeded past `max_cycles`.
std::vector<DirectedCycle> simple_cycles(const ReactionNetwork& net, const CycleOptions& opts = {});

/// Per-reaction flag: does the reaction have a positive rate at some state?
std::vector<bool> active_reactions(const MassActionSystem& sys,
                                   std::span<const DiscreteState> states);
std::vector<bool> active_reactions(const MassActionSystem& sys, std::span<const DetState> states);

/// Network spanned by the reactions flagged in `active`, restricted to the
/// species and complexes those reactions use. May be the empty network.
ReactionNetwork subnetwork(const ReactionNetwork& net, const std::vector<bool>& active);

ReactionNetwork active_subnetwork(const MassActionSystem& sys,
                                  std::span<const DiscreteState> states);
ReactionNetwork active_subnetwork(const MassActionSystem& sys, std::span<const DetState> states);

}  // namespace crn
