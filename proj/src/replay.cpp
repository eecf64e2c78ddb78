#include "crisisflow/mining.hpp"

#include <deque>
#include <functional>
#include <map>
#include <optional>

namespace crisisflow {

namespace {

constexpr std::size_t kAlignmentCap = 200'000;
constexpr std::size_t kSilentCap = 10'000;

using Path = std::vector<const Transition*>;

std::vector<const Transition*> labelled(const WorkflowNet& net, const std::string& label) {
    std::vector<const Transition*> out;
    for (const auto& t : net.transitions())
        if (t.label && *t.label == label)
            out.push_back(&t);
    return out;
}

Marking apply(const Transition& t, Marking m) {
    for (const auto& p : t.inputs)
        m.remove(p);
    for (const auto& p : t.outputs)
        m.add(p);
    return m;
}

void count(const Path& path, FitnessReport& report) {
    for (const Transition* t : path) {
        report.consumed += t->inputs.size();
        report.produced += t->outputs.size();
    }
}

// Shortest firing sequence (visible events in trace order, silent
// transitions anywhere) from {source:1} to exactly {sink:1}.
std::optional<Path> perfect_alignment(const WorkflowNet& net, const ActivitySequence& trace) {
    std::vector<std::vector<const Transition*>> candidates;
    for (const auto& activity : trace) {
        candidates.push_back(labelled(net, activity));
        if (candidates.back().empty())
            return std::nullopt;
    }
    std::vector<const Transition*> silent;
    for (const auto& t : net.transitions())
        if (t.silent())
            silent.push_back(&t);

    struct Node {
        std::size_t pos;
        Marking marking;
        std::size_t parent;
        const Transition* via;
    };
    std::vector<Node> nodes;
    std::map<std::pair<std::size_t, Marking>, std::size_t> seen;
    nodes.push_back({0, net.initial_marking(), 0, nullptr});
    seen.emplace(std::make_pair(std::size_t{0}, nodes.front().marking), 0);
    const Marking goal = net.final_marking();

    for (std::size_t cursor = 0; cursor < nodes.size(); ++cursor) {
        const std::size_t pos = nodes[cursor].pos;
        const Marking current = nodes[cursor].marking;
        if (pos == trace.size() && current == goal) {
            Path path;
            for (std::size_t k = cursor; k != 0; k = nodes[k].parent)
                path.push_back(nodes[k].via);
            return Path(path.rbegin(), path.rend());
        }
        auto expand = [&](const Transition* t, std::size_t next_pos) {
            if (!is_enabled(*t, current))
                return true;
            Marking next = apply(*t, current);
            auto key = std::make_pair(next_pos, next);
            if (seen.count(key))
                return true;
            if (nodes.size() >= kAlignmentCap)
                return false;
            seen.emplace(std::move(key), nodes.size());
            nodes.push_back({next_pos, std::move(next), cursor, t});
            return true;
        };
        if (pos < trace.size())
            for (const Transition* t : candidates[pos])
                if (!expand(t, pos + 1))
                    return std::nullopt;
        for (const Transition* t : silent)
            if (!expand(t, pos))
                return std::nullopt;
    }
    return std::nullopt;
}

// Breadth-first over silent firings; returns the path to the first marking
// accepted by `score` with the lowest score (ties: discovery order).
std::optional<Path> silent_search(const WorkflowNet& net, const Marking& start,
                                  const std::function<std::optional<std::uint64_t>(const Marking&)>& score) {
    struct Node {
        Marking marking;
        std::size_t parent;
        const Transition* via;
    };
    std::vector<Node> nodes{{start, 0, nullptr}};
    std::map<Marking, std::size_t> seen{{start, 0}};
    std::optional<std::pair<std::uint64_t, std::size_t>> best;
    for (std::size_t cursor = 0; cursor < nodes.size(); ++cursor) {
        const Marking current = nodes[cursor].marking;
        if (auto s = score(current); s && (!best || *s < best->first))
            best = {*s, cursor};
        for (const auto& t : net.transitions()) {
            if (!t.silent() || !is_enabled(t, current))
                continue;
            Marking next = apply(t, current);
            if (seen.count(next) || nodes.size() >= kSilentCap)
                continue;
            seen.emplace(next, nodes.size());
            nodes.push_back({std::move(next), cursor, &t});
        }
    }
    if (!best)
        return std::nullopt;
    Path path;
    for (std::size_t k = best->second; k != 0; k = nodes[k].parent)
        path.push_back(nodes[k].via);
    return Path(path.rbegin(), path.rend());
}

FitnessReport greedy_replay(const WorkflowNet& net, const ActivitySequence& trace) {
    FitnessReport report;
    Marking m = net.initial_marking();
    report.produced = 1;
    std::uint64_t unmatched = 0;

    auto run = [&](const Path& path) {
        for (const Transition* t : path)
            m = apply(*t, m);
        count(path, report);
    };

    for (const auto& activity : trace) {
        auto options = labelled(net, activity);
        if (options.empty()) {
            ++report.missing;
            ++report.consumed;
            ++report.produced;
            ++unmatched;
            continue;
        }
        const Transition* chosen = nullptr;
        for (const Transition* t : options) {
            if (is_enabled(*t, m)) {
                chosen = t;
                break;
            }
        }
        if (!chosen) {
            auto path = silent_search(net, m, [&](const Marking& candidate) -> std::optional<std::uint64_t> {
                for (const Transition* t : options)
                    if (is_enabled(*t, candidate))
                        return 0;
                return std::nullopt;
            });
            if (path) {
                run(*path);
                for (const Transition* t : options) {
                    if (is_enabled(*t, m)) {
                        chosen = t;
                        break;
                    }
                }
            }
        }
        if (!chosen) {
            chosen = options.front();
            for (const auto& p : chosen->inputs) {
                if (m[p] == 0) {
                    ++report.missing;
                    m.add(p);
                }
            }
        }
        run(Path{chosen});
    }

    const std::string& sink = net.sink();
    auto finish = silent_search(net, m, [&](const Marking& candidate) -> std::optional<std::uint64_t> {
        if (candidate[sink] == 0)
            return std::nullopt;
        return candidate.total();
    });
    if (finish && !finish->empty())
        run(*finish);

    ++report.consumed;
    if (m.remove(sink) == 0)
        ++report.missing;
    report.remaining = m.total() + unmatched;
    return report;
}

} // namespace

double FitnessReport::fitness() const {
    if (consumed == 0 || produced == 0)
        return 1.0;
    return 0.5 * (1.0 - static_cast<double>(missing) / static_cast<double>(consumed)) +
           0.5 * (1.0 - static_cast<double>(remaining) / static_cast<double>(produced));
}

FitnessReport& FitnessReport::operator+=(const FitnessReport& other) {
    produced += other.produced;
    consumed += other.consumed;
    missing += other.missing;
    remaining += other.remaining;
    return *this;
}

FitnessReport token_replay(const WorkflowNet& net, const ActivitySequence& trace) {
    if (auto path = perfect_alignment(net, trace)) {
        FitnessReport report;
        report.produced = 1;
        count(*path, report);
        report.consumed += 1;
        return report;
    }
    return greedy_replay(net, trace);
}

FitnessReport token_replay(const WorkflowNet& net, const std::vector<ActivitySequence>& traces) {
    FitnessReport total;
    for (const auto& trace : traces)
        total += token_replay(net, trace);
    return total;
}

} // namespace crisisflow
