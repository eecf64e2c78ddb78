#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crisisflow {

/// Multiset of tokens over place ids. Zero counts are never stored, so two
/// markings with the same non-zero entries compare (and hash) equal.
class Marking {
public:
    using Counts = std::map<std::string, std::uint32_t, std::less<>>;

    Marking() = default;
    Marking(std::initializer_list<std::pair<const std::string, std::uint32_t>> init);

    std::uint32_t operator[](std::string_view place) const;

    void add(const std::string& place, std::uint32_t n = 1);
    /// Removes `n` tokens; returns how many were actually present to remove.
    std::uint32_t remove(std::string_view place, std::uint32_t n = 1);

    const Counts& counts() const noexcept { return counts_; }
    std::uint64_t total() const;
    bool empty() const noexcept { return counts_.empty(); }

    /// `{i:1, p:2}` style rendering, places in lexicographic order.
    std::string to_string() const;

    friend bool operator==(const Marking&, const Marking&) = default;
    friend auto operator<=>(const Marking& a, const Marking& b) { return a.counts_ <=> b.counts_; }

private:
    Counts counts_;
};

struct Transition {
    std::string id;
    /// Visible task label; silent transitions carry none.
    std::optional<std::string> label;
    std::vector<std::string> inputs;  // sorted, unique
    std::vector<std::string> outputs; // sorted, unique

    bool silent() const noexcept { return !label.has_value(); }

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Petri net with a distinguished source place and sink place. Arcs have unit
/// weight. Place ids and transition ids share one namespace.
class WorkflowNet {
public:
    explicit WorkflowNet(std::string source = "i", std::string sink = "o");

    /// Adds a place; adding an existing place is a no-op.
    void add_place(const std::string& id);
    void add_transition(const std::string& id, std::optional<std::string> label);
    /// Adds a place->transition or transition->place arc. Both ends must exist.
    void add_arc(const std::string& from, const std::string& to);
    /// Removes an arc; returns false if it did not exist.
    bool remove_arc(const std::string& from, const std::string& to);

    const std::string& source() const noexcept { return source_; }
    const std::string& sink() const noexcept { return sink_; }
    const std::set<std::string, std::less<>>& places() const noexcept { return places_; }
    /// Transitions in lexicographic id order.
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }

    bool has_place(std::string_view id) const;
    const Transition* find_transition(std::string_view id) const;
    /// Throws NetError(UnknownTransition) when absent.
    const Transition& transition(std::string_view id) const;
    /// First transition (by id) carrying `label`, if any.
    const Transition* find_by_label(std::string_view label) const;

    std::size_t visible_count() const;
    std::size_t arc_count() const;

    Marking initial_marking() const { return Marking{{source_, 1}}; }
    Marking final_marking() const { return Marking{{sink_, 1}}; }

    /// Empty iff the workflow-net structure holds: the source has no incoming
    /// arcs, the sink has no outgoing arcs, and every node lies on a directed
    /// path from source to sink.
    std::vector<std::string> structural_violations() const;

    friend bool operator==(const WorkflowNet&, const WorkflowNet&) = default;

private:
    Transition* mutable_transition(std::string_view id);

    std::string source_;
    std::string sink_;
    std::set<std::string, std::less<>> places_;
    std::vector<Transition> transitions_;
};

/// Transitions whose every input place holds a token in `m`, in id order.
std::vector<std::string> enabled_transitions(const WorkflowNet& net, const Marking& m);

bool is_enabled(const Transition& t, const Marking& m);

/// m - preset(t) + postset(t). Throws NetError(NotEnabled) if t is not enabled.
Marking fire(const WorkflowNet& net, const Marking& m, std::string_view transition);

/// JSON carrier for nets: {source, sink, places, transitions:[{id,label}], arcs:[{from,to}]}.
std::string write_net_json(const WorkflowNet& net);
WorkflowNet read_net_json(std::string_view text);

} // namespace crisisflow
