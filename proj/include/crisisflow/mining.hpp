#pragma once

#include "crisisflow/event_log.hpp"
#include "crisisflow/net.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace crisisflow {

using ActivityPair = std::pair<std::string, std::string>;

/// (a, b) such that b immediately follows a in some trace.
std::set<ActivityPair> directly_follows(const std::vector<ActivitySequence>& traces);

enum class Relation { Causal, ReverseCausal, Parallel, Unrelated };

/// "->", "<-", "||", "#".
std::string_view symbol(Relation r);

class Footprint {
public:
    Footprint() = default;
    explicit Footprint(const std::vector<ActivitySequence>& traces);

    /// Activities in lexicographic order.
    const std::vector<std::string>& activities() const noexcept { return activities_; }
    bool contains(const std::string& activity) const;
    /// Relation for any pair of activities; pairs outside the log are unrelated.
    Relation relation(const std::string& a, const std::string& b) const;

    /// Tab-separated matrix with a header row, one line per activity.
    std::string to_table() const;

private:
    std::vector<std::string> activities_;
    std::set<ActivityPair> follows_;
};

inline Footprint footprint(const std::vector<ActivitySequence>& traces) { return Footprint(traces); }

/// Classical alpha algorithm. Transitions are the log's activities (id and
/// label both equal the activity name); places are `i`, `o` and one
/// `p({A},{B})` per maximal pair. Throws MiningError(EmptyLog) when the log
/// or any trace is empty.
WorkflowNet alpha_discover(const std::vector<ActivitySequence>& traces);

struct FitnessReport {
    std::uint64_t produced = 0;
    std::uint64_t consumed = 0;
    std::uint64_t missing = 0;
    std::uint64_t remaining = 0;

    /// 1/2 (1 - m/c) + 1/2 (1 - r/p); 1 for an empty replay.
    double fitness() const;

    FitnessReport& operator+=(const FitnessReport& other);
};

/// Token-based replay. Traces that the net can reproduce exactly, possibly by
/// interleaving silent transitions, are found by search and score 1.0.
/// Otherwise events are replayed greedily: silent transitions are fired when
/// that enables the next event, and missing tokens are created on demand.
/// An activity with no transition counts one missing and one remaining token.
FitnessReport token_replay(const WorkflowNet& net, const std::vector<ActivitySequence>& traces);
FitnessReport token_replay(const WorkflowNet& net, const ActivitySequence& trace);

struct Sociogram {
    std::set<std::string> nodes;
    std::map<ActivityPair, std::uint64_t> edges;

    std::uint64_t weight(const std::string& from, const std::string& to) const;
    /// DOT digraph, nodes labelled with actor ids and edges with weights.
    std::string to_dot() const;

    friend bool operator==(const Sociogram&, const Sociogram&) = default;
};

/// Handover of work by direct succession inside each trace (self-loops kept).
/// Throws MiningError(MissingResource) naming the first event without one.
Sociogram handover_network(const EventLog& log);

struct Degree {
    std::uint64_t in = 0;
    std::uint64_t out = 0;
    std::uint64_t total = 0;

    friend bool operator==(const Degree&, const Degree&) = default;
};

enum class DegreeWeighting { Weighted, Unweighted };

std::map<std::string, Degree> degree_stats(const Sociogram& g, bool include_self_loops,
                                           DegreeWeighting weighting = DegreeWeighting::Weighted);

} // namespace crisisflow
