#pragma once

#include "crisisflow/net.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace crisisflow {

inline constexpr std::size_t kDefaultStateCap = 100'000;

struct ReachabilityEdge {
    std::size_t from;
    std::string transition;
    std::size_t to;

    friend bool operator==(const ReachabilityEdge&, const ReachabilityEdge&) = default;
};

/// Nodes are listed in discovery order; edges refer to node indices.
struct ReachabilityGraph {
    std::vector<Marking> nodes;
    std::vector<ReachabilityEdge> edges;
    Marking initial;
    bool truncated = false;

    /// Index of `m` in `nodes`, or nodes.size() when absent.
    std::size_t index_of(const Marking& m) const;
};

/// Breadth-first exploration from `initial`, firing enabled transitions in id
/// order. Stops with `truncated = true` once more than `cap` distinct markings
/// would be needed.
ReachabilityGraph reachability_graph(const WorkflowNet& net, const Marking& initial, std::size_t cap);

struct SoundnessReport {
    bool option_to_complete = false;
    bool proper_completion = false;
    std::set<std::string> dead_transitions;
    bool sound = false;
    std::size_t markings = 0;
    /// False only when exploration hit the cap but had already found a marking
    /// with two or more tokens in the sink. The verdict is then certain, while
    /// `dead_transitions` lists what the explored fragment never fired.
    bool exhaustive = true;
};

/// Checks option to complete, proper completion and absence of dead
/// transitions from the initial marking {source:1}.
/// Throws NetError(StateSpaceExceeded) when the cap is hit and no conclusive
/// counterexample was seen.
SoundnessReport check_soundness(const WorkflowNet& net, std::size_t cap = kDefaultStateCap);

} // namespace crisisflow
