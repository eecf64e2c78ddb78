#include "crisisflow/mining.hpp"

#include <algorithm>

namespace crisisflow {

std::set<ActivityPair> directly_follows(const std::vector<ActivitySequence>& traces) {
    std::set<ActivityPair> result;
    for (const auto& trace : traces)
        for (std::size_t k = 1; k < trace.size(); ++k)
            result.emplace(trace[k - 1], trace[k]);
    return result;
}

std::string_view symbol(Relation r) {
    switch (r) {
    case Relation::Causal: return "->";
    case Relation::ReverseCausal: return "<-";
    case Relation::Parallel: return "||";
    case Relation::Unrelated: return "#";
    }
    return "?";
}

Footprint::Footprint(const std::vector<ActivitySequence>& traces) : follows_(directly_follows(traces)) {
    std::set<std::string> seen;
    for (const auto& trace : traces)
        seen.insert(trace.begin(), trace.end());
    activities_.assign(seen.begin(), seen.end());
}

bool Footprint::contains(const std::string& activity) const {
    return std::binary_search(activities_.begin(), activities_.end(), activity);
}

Relation Footprint::relation(const std::string& a, const std::string& b) const {
    bool ab = follows_.count({a, b}) > 0;
    bool ba = follows_.count({b, a}) > 0;
    if (ab && ba)
        return Relation::Parallel;
    if (ab)
        return Relation::Causal;
    if (ba)
        return Relation::ReverseCausal;
    return Relation::Unrelated;
}

std::string Footprint::to_table() const {
    std::string out;
    for (const auto& a : activities_)
        out += '\t' + a;
    out += '\n';
    for (const auto& a : activities_) {
        out += a;
        for (const auto& b : activities_) {
            out += '\t';
            out += symbol(relation(a, b));
        }
        out += '\n';
    }
    return out;
}

} // namespace crisisflow
