#include "crisisflow/error.hpp"
#include "crisisflow/mining.hpp"

#include <sstream>

namespace crisisflow {

std::uint64_t Sociogram::weight(const std::string& from, const std::string& to) const {
    auto it = edges.find({from, to});
    return it == edges.end() ? 0 : it->second;
}

namespace {

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + '"';
}

} // namespace

std::string Sociogram::to_dot() const {
    std::ostringstream out;
    out << "digraph handover {\n";
    for (const auto& n : nodes)
        out << "  " << dot_quote(n) << " [label=" << dot_quote(n) << "];\n";
    for (const auto& [pair, w] : edges)
        out << "  " << dot_quote(pair.first) << " -> " << dot_quote(pair.second) << " [label=\"" << w
            << "\", weight=" << w << "];\n";
    out << "}\n";
    return out.str();
}

Sociogram handover_network(const EventLog& log) {
    Sociogram g;
    for (const auto& trace : log.traces) {
        for (std::size_t k = 0; k < trace.events.size(); ++k) {
            const Event& e = trace.events[k];
            if (e.resource.empty())
                throw MiningError(MiningError::Kind::MissingResource,
                                  "event " + std::to_string(k + 1) + " (" + e.activity + ") of case " +
                                      trace.case_id + " has no resource");
            g.nodes.insert(e.resource);
            if (k > 0)
                ++g.edges[{trace.events[k - 1].resource, e.resource}];
        }
    }
    return g;
}

std::map<std::string, Degree> degree_stats(const Sociogram& g, bool include_self_loops, DegreeWeighting weighting) {
    std::map<std::string, Degree> stats;
    for (const auto& n : g.nodes)
        stats[n];
    for (const auto& [pair, w] : g.edges) {
        const auto& [from, to] = pair;
        stats[from];
        stats[to];
        if (from == to && !include_self_loops)
            continue;
        std::uint64_t amount = weighting == DegreeWeighting::Weighted ? w : 1;
        stats[from].out += amount;
        stats[to].in += amount;
    }
    for (auto& [actor, d] : stats)
        d.total = d.in + d.out;
    return stats;
}

} // namespace crisisflow
