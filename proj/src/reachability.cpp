#include "crisisflow/reachability.hpp"

#include "crisisflow/error.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace crisisflow {

std::size_t ReachabilityGraph::index_of(const Marking& m) const {
    for (std::size_t k = 0; k < nodes.size(); ++k)
        if (nodes[k] == m)
            return k;
    return nodes.size();
}

ReachabilityGraph reachability_graph(const WorkflowNet& net, const Marking& initial, std::size_t cap) {
    ReachabilityGraph graph;
    graph.initial = initial;
    if (cap == 0) {
        graph.truncated = true;
        return graph;
    }

    std::map<Marking, std::size_t> index;
    graph.nodes.push_back(initial);
    index.emplace(initial, 0);

    for (std::size_t cursor = 0; cursor < graph.nodes.size(); ++cursor) {
        // Copy: push_back below may reallocate.
        const Marking current = graph.nodes[cursor];
        for (const auto& t : net.transitions()) {
            if (!is_enabled(t, current))
                continue;
            Marking next = current;
            for (const auto& p : t.inputs)
                next.remove(p);
            for (const auto& p : t.outputs)
                next.add(p);

            auto it = index.find(next);
            if (it == index.end()) {
                if (graph.nodes.size() >= cap) {
                    graph.truncated = true;
                    return graph;
                }
                it = index.emplace(next, graph.nodes.size()).first;
                graph.nodes.push_back(std::move(next));
            }
            graph.edges.push_back({cursor, t.id, it->second});
        }
    }
    return graph;
}

SoundnessReport check_soundness(const WorkflowNet& net, std::size_t cap) {
    const Marking initial = net.initial_marking();
    const Marking final_marking = net.final_marking();
    const ReachabilityGraph graph = reachability_graph(net, initial, cap);

    SoundnessReport report;
    report.markings = graph.nodes.size();

    bool improper = false;
    bool sink_overflow = false;
    for (const auto& m : graph.nodes) {
        const auto in_sink = m[net.sink()];
        if (in_sink > 0 && m != final_marking)
            improper = true;
        // Sink tokens are never consumed, so {sink:1} is unreachable from here.
        if (in_sink >= 2)
            sink_overflow = true;
    }

    std::set<std::string> fired;
    for (const auto& e : graph.edges)
        fired.insert(e.transition);
    for (const auto& t : net.transitions())
        if (!fired.count(t.id))
            report.dead_transitions.insert(t.id);

    if (graph.truncated) {
        if (!sink_overflow)
            throw NetError(NetError::Kind::StateSpaceExceeded,
                           "state space exceeds " + std::to_string(cap) + " markings");
        report.exhaustive = false;
        report.option_to_complete = false;
        report.proper_completion = false;
        report.sound = false;
        return report;
    }

    // Backward sweep from the final marking over reversed edges.
    std::vector<std::vector<std::size_t>> reverse(graph.nodes.size());
    for (const auto& e : graph.edges)
        reverse[e.to].push_back(e.from);
    std::vector<bool> reaches_final(graph.nodes.size(), false);
    std::deque<std::size_t> queue;
    for (std::size_t k = 0; k < graph.nodes.size(); ++k) {
        if (graph.nodes[k] == final_marking) {
            reaches_final[k] = true;
            queue.push_back(k);
        }
    }
    while (!queue.empty()) {
        std::size_t node = queue.front();
        queue.pop_front();
        for (std::size_t prev : reverse[node]) {
            if (!reaches_final[prev]) {
                reaches_final[prev] = true;
                queue.push_back(prev);
            }
        }
    }

    report.option_to_complete = std::all_of(reaches_final.begin(), reaches_final.end(), [](bool b) { return b; });
    report.proper_completion = !improper;
    report.sound = report.option_to_complete && report.proper_completion && report.dead_transitions.empty();
    return report;
}

} // namespace crisisflow
