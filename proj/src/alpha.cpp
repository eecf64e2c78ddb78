#include "crisisflow/error.hpp"
#include "crisisflow/mining.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace crisisflow {

namespace {

using IndexSet = std::vector<std::size_t>; // sorted
using Candidate = std::pair<IndexSet, IndexSet>;

bool subset(const IndexSet& a, const IndexSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

std::string set_name(const IndexSet& set, const std::vector<std::string>& names) {
    std::string out = "{";
    for (std::size_t k = 0; k < set.size(); ++k)
        out += (k ? "," : "") + names[set[k]];
    return out + "}";
}

} // namespace

WorkflowNet alpha_discover(const std::vector<ActivitySequence>& traces) {
    if (traces.empty())
        throw MiningError(MiningError::Kind::EmptyLog, "alpha discovery needs at least one trace");
    for (std::size_t k = 0; k < traces.size(); ++k)
        if (traces[k].empty())
            throw MiningError(MiningError::Kind::EmptyLog, "trace " + std::to_string(k + 1) + " is empty");

    const Footprint fp(traces);
    const auto& names = fp.activities();
    const std::size_t n = names.size();

    std::vector<std::vector<Relation>> rel(n, std::vector<Relation>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            rel[a][b] = fp.relation(names[a], names[b]);

    auto index_of = [&](const std::string& activity) {
        return static_cast<std::size_t>(std::lower_bound(names.begin(), names.end(), activity) - names.begin());
    };
    std::set<std::size_t> starts, ends;
    for (const auto& trace : traces) {
        starts.insert(index_of(trace.front()));
        ends.insert(index_of(trace.back()));
    }

    // (A, B) is admissible when every a->b is causal and A, B are internally unrelated.
    auto unrelated_with = [&](const IndexSet& set, std::size_t x) {
        if (rel[x][x] != Relation::Unrelated)
            return false;
        return std::all_of(set.begin(), set.end(), [&](std::size_t y) { return rel[x][y] == Relation::Unrelated; });
    };
    auto can_add_input = [&](const Candidate& c, std::size_t x) {
        return unrelated_with(c.first, x) &&
               std::all_of(c.second.begin(), c.second.end(), [&](std::size_t b) { return rel[x][b] == Relation::Causal; });
    };
    auto can_add_output = [&](const Candidate& c, std::size_t x) {
        return unrelated_with(c.second, x) &&
               std::all_of(c.first.begin(), c.first.end(), [&](std::size_t a) { return rel[a][x] == Relation::Causal; });
    };

    // Every admissible pair is reachable from a singleton pair by adding one
    // activity at a time, since subsets of admissible pairs are admissible.
    std::set<Candidate> seen;
    std::deque<Candidate> queue;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (rel[a][b] != Relation::Causal || rel[a][a] != Relation::Unrelated || rel[b][b] != Relation::Unrelated)
                continue;
            Candidate c{{a}, {b}};
            if (seen.insert(c).second)
                queue.push_back(std::move(c));
        }
    }
    while (!queue.empty()) {
        Candidate c = std::move(queue.front());
        queue.pop_front();
        for (std::size_t x = 0; x < n; ++x) {
            if (!std::binary_search(c.first.begin(), c.first.end(), x) && can_add_input(c, x)) {
                Candidate grown = c;
                grown.first.insert(std::lower_bound(grown.first.begin(), grown.first.end(), x), x);
                if (seen.insert(grown).second)
                    queue.push_back(std::move(grown));
            }
            if (!std::binary_search(c.second.begin(), c.second.end(), x) && can_add_output(c, x)) {
                Candidate grown = c;
                grown.second.insert(std::lower_bound(grown.second.begin(), grown.second.end(), x), x);
                if (seen.insert(grown).second)
                    queue.push_back(std::move(grown));
            }
        }
    }

    std::vector<Candidate> maximal;
    for (const auto& c : seen) {
        bool dominated = std::any_of(seen.begin(), seen.end(), [&](const Candidate& other) {
            return other != c && subset(c.first, other.first) && subset(c.second, other.second);
        });
        if (!dominated)
            maximal.push_back(c);
    }

    WorkflowNet net("i", "o");
    for (const auto& activity : names)
        net.add_transition(activity, activity);
    for (std::size_t s : starts)
        net.add_arc(net.source(), names[s]);
    for (std::size_t e : ends)
        net.add_arc(names[e], net.sink());
    for (const auto& [inputs, outputs] : maximal) {
        std::string place = "p(" + set_name(inputs, names) + "," + set_name(outputs, names) + ")";
        net.add_place(place);
        for (std::size_t a : inputs)
            net.add_arc(names[a], place);
        for (std::size_t b : outputs)
            net.add_arc(place, names[b]);
    }
    return net;
}

} // namespace crisisflow
