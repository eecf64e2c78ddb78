#include "crisisflow/net.hpp"

#include "crisisflow/error.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace crisisflow {

Marking::Marking(std::initializer_list<std::pair<const std::string, std::uint32_t>> init) {
    for (const auto& [place, n] : init)
        add(place, n);
}

std::uint32_t Marking::operator[](std::string_view place) const {
    auto it = counts_.find(place);
    return it == counts_.end() ? 0 : it->second;
}

void Marking::add(const std::string& place, std::uint32_t n) {
    if (n == 0)
        return;
    counts_[place] += n;
}

std::uint32_t Marking::remove(std::string_view place, std::uint32_t n) {
    auto it = counts_.find(place);
    if (it == counts_.end())
        return 0;
    std::uint32_t taken = std::min(it->second, n);
    it->second -= taken;
    if (it->second == 0)
        counts_.erase(it);
    return taken;
}

std::uint64_t Marking::total() const {
    std::uint64_t sum = 0;
    for (const auto& [place, n] : counts_)
        sum += n;
    return sum;
}

std::string Marking::to_string() const {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [place, n] : counts_) {
        if (!first)
            out << ", ";
        first = false;
        out << place << ':' << n;
    }
    out << '}';
    return out.str();
}

WorkflowNet::WorkflowNet(std::string source, std::string sink)
    : source_(std::move(source)), sink_(std::move(sink)) {
    places_.insert(source_);
    places_.insert(sink_);
}

void WorkflowNet::add_place(const std::string& id) {
    if (find_transition(id))
        throw NetError(NetError::Kind::Syntax, "place id '" + id + "' is already a transition");
    places_.insert(id);
}

void WorkflowNet::add_transition(const std::string& id, std::optional<std::string> label) {
    if (has_place(id))
        throw NetError(NetError::Kind::Syntax, "transition id '" + id + "' is already a place");
    auto it = std::lower_bound(transitions_.begin(), transitions_.end(), id,
                               [](const Transition& t, const std::string& key) { return t.id < key; });
    if (it != transitions_.end() && it->id == id)
        throw NetError(NetError::Kind::Syntax, "duplicate transition '" + id + "'");
    transitions_.insert(it, Transition{id, std::move(label), {}, {}});
}

namespace {

void insert_sorted(std::vector<std::string>& v, const std::string& value) {
    auto it = std::lower_bound(v.begin(), v.end(), value);
    if (it == v.end() || *it != value)
        v.insert(it, value);
}

bool erase_sorted(std::vector<std::string>& v, const std::string& value) {
    auto it = std::lower_bound(v.begin(), v.end(), value);
    if (it == v.end() || *it != value)
        return false;
    v.erase(it);
    return true;
}

} // namespace

void WorkflowNet::add_arc(const std::string& from, const std::string& to) {
    if (has_place(from)) {
        Transition* t = mutable_transition(to);
        if (!t)
            throw NetError(NetError::Kind::Syntax, "arc " + from + "->" + to + ": unknown transition '" + to + "'");
        insert_sorted(t->inputs, from);
        return;
    }
    if (Transition* t = mutable_transition(from)) {
        if (!has_place(to))
            throw NetError(NetError::Kind::Syntax, "arc " + from + "->" + to + ": unknown place '" + to + "'");
        insert_sorted(t->outputs, to);
        return;
    }
    throw NetError(NetError::Kind::Syntax, "arc " + from + "->" + to + ": unknown node '" + from + "'");
}

bool WorkflowNet::remove_arc(const std::string& from, const std::string& to) {
    if (Transition* t = mutable_transition(to); t && has_place(from))
        return erase_sorted(t->inputs, from);
    if (Transition* t = mutable_transition(from); t && has_place(to))
        return erase_sorted(t->outputs, to);
    return false;
}

bool WorkflowNet::has_place(std::string_view id) const { return places_.find(id) != places_.end(); }

const Transition* WorkflowNet::find_transition(std::string_view id) const {
    auto it = std::lower_bound(transitions_.begin(), transitions_.end(), id,
                               [](const Transition& t, std::string_view key) { return t.id < key; });
    if (it == transitions_.end() || it->id != id)
        return nullptr;
    return &*it;
}

Transition* WorkflowNet::mutable_transition(std::string_view id) {
    return const_cast<Transition*>(std::as_const(*this).find_transition(id));
}

const Transition& WorkflowNet::transition(std::string_view id) const {
    if (const Transition* t = find_transition(id))
        return *t;
    throw NetError(NetError::Kind::UnknownTransition, "unknown transition '" + std::string(id) + "'");
}

const Transition* WorkflowNet::find_by_label(std::string_view label) const {
    for (const auto& t : transitions_)
        if (t.label && *t.label == label)
            return &t;
    return nullptr;
}

std::size_t WorkflowNet::visible_count() const {
    return static_cast<std::size_t>(
        std::count_if(transitions_.begin(), transitions_.end(), [](const Transition& t) { return !t.silent(); }));
}

std::size_t WorkflowNet::arc_count() const {
    std::size_t n = 0;
    for (const auto& t : transitions_)
        n += t.inputs.size() + t.outputs.size();
    return n;
}

std::vector<std::string> WorkflowNet::structural_violations() const {
    std::vector<std::string> violations;

    std::unordered_map<std::string, std::vector<std::string>> succ;
    std::unordered_map<std::string, std::vector<std::string>> pred;
    for (const auto& t : transitions_) {
        for (const auto& p : t.inputs) {
            succ[p].push_back(t.id);
            pred[t.id].push_back(p);
        }
        for (const auto& p : t.outputs) {
            succ[t.id].push_back(p);
            pred[p].push_back(t.id);
        }
    }

    if (!pred[source_].empty())
        violations.push_back("source place '" + source_ + "' has incoming arcs");
    if (!succ[sink_].empty())
        violations.push_back("sink place '" + sink_ + "' has outgoing arcs");

    auto sweep = [](const std::string& start, std::unordered_map<std::string, std::vector<std::string>>& adj) {
        std::unordered_set<std::string> seen{start};
        std::deque<std::string> queue{start};
        while (!queue.empty()) {
            std::string node = std::move(queue.front());
            queue.pop_front();
            for (const auto& next : adj[node])
                if (seen.insert(next).second)
                    queue.push_back(next);
        }
        return seen;
    };
    auto from_source = sweep(source_, succ);
    auto to_sink = sweep(sink_, pred);

    auto check = [&](const std::string& node, const char* what) {
        if (!from_source.count(node))
            violations.push_back(std::string(what) + " '" + node + "' is not reachable from the source");
        if (!to_sink.count(node))
            violations.push_back(std::string(what) + " '" + node + "' cannot reach the sink");
    };
    for (const auto& p : places_)
        check(p, "place");
    for (const auto& t : transitions_)
        check(t.id, "transition");
    return violations;
}

bool is_enabled(const Transition& t, const Marking& m) {
    return std::all_of(t.inputs.begin(), t.inputs.end(), [&](const std::string& p) { return m[p] > 0; });
}

std::vector<std::string> enabled_transitions(const WorkflowNet& net, const Marking& m) {
    std::vector<std::string> result;
    for (const auto& t : net.transitions())
        if (is_enabled(t, m))
            result.push_back(t.id);
    return result;
}

Marking fire(const WorkflowNet& net, const Marking& m, std::string_view transition) {
    const Transition& t = net.transition(transition);
    if (!is_enabled(t, m))
        throw NetError(NetError::Kind::NotEnabled,
                       "transition '" + t.id + "' is not enabled in marking " + m.to_string());
    Marking next = m;
    for (const auto& p : t.inputs)
        next.remove(p);
    for (const auto& p : t.outputs)
        next.add(p);
    return next;
}

std::string write_net_json(const WorkflowNet& net) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["source"] = net.source();
    doc["sink"] = net.sink();
    doc["places"] = ordered_json::array();
    for (const auto& p : net.places())
        doc["places"].push_back(p);
    doc["transitions"] = ordered_json::array();
    ordered_json arcs = ordered_json::array();
    for (const auto& t : net.transitions()) {
        ordered_json entry;
        entry["id"] = t.id;
        entry["label"] = t.label ? ordered_json(*t.label) : ordered_json(nullptr);
        doc["transitions"].push_back(entry);
        for (const auto& p : t.inputs)
            arcs.push_back({{"from", p}, {"to", t.id}});
        for (const auto& p : t.outputs)
            arcs.push_back({{"from", t.id}, {"to", p}});
    }
    doc["arcs"] = std::move(arcs);
    return doc.dump(2) + "\n";
}

WorkflowNet read_net_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw NetError(NetError::Kind::Syntax, std::string("net JSON: ") + e.what());
    }
    try {
        WorkflowNet net(doc.value("source", std::string("i")), doc.value("sink", std::string("o")));
        for (const auto& p : doc.at("places"))
            net.add_place(p.get<std::string>());
        for (const auto& t : doc.at("transitions")) {
            std::optional<std::string> label;
            if (t.contains("label") && !t.at("label").is_null())
                label = t.at("label").get<std::string>();
            net.add_transition(t.at("id").get<std::string>(), std::move(label));
        }
        for (const auto& a : doc.at("arcs"))
            net.add_arc(a.at("from").get<std::string>(), a.at("to").get<std::string>());
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw NetError(NetError::Kind::Syntax, std::string("net JSON: ") + e.what());
    }
}

} // namespace crisisflow
