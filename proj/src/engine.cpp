#include "crisisflow/engine.hpp"

#include "crisisflow/error.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace crisisflow {

std::string_view to_string(CaseStatus s) { return s == CaseStatus::Running ? "running" : "completed"; }

std::string_view to_string(WorkItemState s) {
    switch (s) {
    case WorkItemState::Enabled: return "enabled";
    case WorkItemState::Offered: return "offered";
    case WorkItemState::Allocated: return "allocated";
    case WorkItemState::Started: return "started";
    case WorkItemState::Completed: return "completed";
    case WorkItemState::Skipped: return "skipped";
    }
    return "?";
}

std::string_view to_string(WorkAction a) {
    switch (a) {
    case WorkAction::Allocate: return "allocate";
    case WorkAction::Start: return "start";
    case WorkAction::Complete: return "complete";
    case WorkAction::Skip: return "skip";
    }
    return "?";
}

std::string_view to_string(TaskStatus s) {
    switch (s) {
    case TaskStatus::Pending: return "pending";
    case TaskStatus::Offered: return "offered";
    case TaskStatus::Allocated: return "allocated";
    case TaskStatus::Started: return "started";
    case TaskStatus::Completed: return "completed";
    case TaskStatus::Skipped: return "skipped";
    }
    return "?";
}

std::optional<WorkAction> work_action_from_string(std::string_view text) {
    for (auto a : {WorkAction::Allocate, WorkAction::Start, WorkAction::Complete, WorkAction::Skip})
        if (to_string(a) == text)
            return a;
    return std::nullopt;
}

struct Engine::CompiledPlan {
    Plan plan;
    WorkflowNet net;
    std::map<std::string, std::string> role_of_transition; // visible transition id -> role
};

struct Engine::CaseRecord {
    mutable std::mutex mutex;
    Case state;
    std::shared_ptr<const CompiledPlan> plan;
    std::map<std::string, WorkItem> items;
    std::vector<std::string> item_order;
    std::map<std::string, std::string> item_transition; // item id -> transition id
    std::vector<Event> events;
    std::uint64_t next_item = 1;
};

namespace {

bool is_open(WorkItemState s) {
    return s == WorkItemState::Enabled || s == WorkItemState::Offered || s == WorkItemState::Allocated ||
           s == WorkItemState::Started;
}

struct ClosureNode {
    Marking marking;
    std::size_t parent;
    const Transition* via;
};

// Markings reachable from `start` by silent firings only, breadth-first.
std::vector<ClosureNode> silent_closure(const WorkflowNet& net, const Marking& start, std::size_t cap) {
    std::vector<ClosureNode> nodes{{start, 0, nullptr}};
    std::set<Marking> seen{start};
    for (std::size_t cursor = 0; cursor < nodes.size() && nodes.size() < cap; ++cursor) {
        const Marking current = nodes[cursor].marking;
        for (const auto& t : net.transitions()) {
            if (!t.silent() || !is_enabled(t, current))
                continue;
            Marking next = fire(net, current, t.id);
            if (seen.insert(next).second)
                nodes.push_back({std::move(next), cursor, &t});
        }
    }
    return nodes;
}

std::set<std::string> reachable_work(const WorkflowNet& net, const std::vector<ClosureNode>& closure) {
    std::set<std::string> result;
    for (const auto& node : closure)
        for (const auto& t : net.transitions())
            if (!t.silent() && is_enabled(t, node.marking))
                result.insert(t.id);
    return result;
}

std::vector<const Transition*> path_to(const std::vector<ClosureNode>& closure, std::size_t index) {
    std::vector<const Transition*> path;
    for (std::size_t k = index; k != 0; k = closure[k].parent)
        path.push_back(closure[k].via);
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace

Engine::Engine(std::size_t state_cap) : state_cap_(state_cap == 0 ? 1 : state_cap) {}

Engine::~Engine() = default;

void Engine::register_plan(const Plan& plan) {
    auto violations = validate_plan(plan);
    if (!violations.empty())
        throw EngineError(EngineError::Kind::Validation,
                          "plan '" + plan.id + "' is invalid: " + violations.front().message);
    std::shared_ptr<CompiledPlan> compiled;
    try {
        compiled = std::make_shared<CompiledPlan>(CompiledPlan{plan, plan_to_net(plan), {}});
    } catch (const PlanError& e) {
        throw EngineError(EngineError::Kind::Validation, e.what());
    }
    for (const auto& t : compiled->net.transitions()) {
        if (t.silent())
            continue;
        std::string task_id = t.label->substr(0, t.label->find('#'));
        compiled->role_of_transition[t.id] = plan.find_task(task_id)->role;
    }

    std::unique_lock lock(registry_mutex_);
    auto it = plans_.find(plan.id);
    if (it != plans_.end()) {
        if (it->second->plan == plan)
            return;
        throw EngineError(EngineError::Kind::Validation, "a different plan is already registered as '" + plan.id + "'");
    }
    plans_.emplace(plan.id, std::move(compiled));
}

std::vector<std::string> Engine::plan_ids() const {
    std::shared_lock lock(registry_mutex_);
    std::vector<std::string> ids;
    for (const auto& [id, p] : plans_)
        ids.push_back(id);
    return ids;
}

std::optional<Plan> Engine::find_plan(std::string_view plan_id) const {
    std::shared_lock lock(registry_mutex_);
    auto it = plans_.find(plan_id);
    if (it == plans_.end())
        return std::nullopt;
    return it->second->plan;
}

std::shared_ptr<const Engine::CompiledPlan> Engine::compiled(std::string_view plan_id) const {
    std::shared_lock lock(registry_mutex_);
    auto it = plans_.find(plan_id);
    if (it == plans_.end())
        throw EngineError(EngineError::Kind::UnknownPlan, "unknown plan '" + std::string(plan_id) + "'");
    return it->second;
}

const WorkflowNet& Engine::net(std::string_view plan_id) const { return compiled(plan_id)->net; }

Case Engine::create_case(const Plan& plan) {
    register_plan(plan);
    return create_case(std::string_view(plan.id));
}

Case Engine::create_case(std::string_view plan_id) {
    auto plan = compiled(plan_id);
    auto record = std::make_shared<CaseRecord>();
    record->plan = plan;
    record->state.plan_id = plan->plan.id;
    record->state.marking = plan->net.initial_marking();
    record->state.clock = clock_epoch();
    {
        std::unique_lock lock(registry_mutex_);
        record->state.id = "c" + std::to_string(next_case_++);
        cases_.emplace(record->state.id, record);
    }
    std::lock_guard guard(record->mutex);
    refresh(*record);
    return record->state;
}

std::vector<std::string> Engine::case_ids() const {
    std::shared_lock lock(registry_mutex_);
    std::vector<std::pair<std::uint64_t, std::string>> ordered;
    for (const auto& [id, record] : cases_)
        ordered.emplace_back(std::stoull(id.substr(1)), id);
    std::sort(ordered.begin(), ordered.end());
    std::vector<std::string> ids;
    for (auto& [n, id] : ordered)
        ids.push_back(std::move(id));
    return ids;
}

std::shared_ptr<Engine::CaseRecord> Engine::find_case(std::string_view case_id) const {
    std::shared_lock lock(registry_mutex_);
    auto it = cases_.find(case_id);
    if (it == cases_.end())
        throw EngineError(EngineError::Kind::UnknownCase, "unknown case '" + std::string(case_id) + "'");
    return it->second;
}

std::vector<WorkItem> Engine::worklist(std::string_view role) const {
    std::vector<std::shared_ptr<CaseRecord>> records;
    {
        std::shared_lock lock(registry_mutex_);
        bool known = std::any_of(plans_.begin(), plans_.end(),
                                 [&](const auto& entry) { return entry.second->plan.find_role(role) != nullptr; });
        if (!known)
            throw EngineError(EngineError::Kind::UnknownRole, "unknown role '" + std::string(role) + "'");
        for (const auto& [id, record] : cases_)
            records.push_back(record);
    }
    std::vector<WorkItem> result;
    for (const auto& record : records) {
        std::lock_guard guard(record->mutex);
        if (record->state.status != CaseStatus::Running)
            continue;
        for (const auto& [id, item] : record->items)
            if (item.role == role && is_open(item.state))
                result.push_back(item);
    }
    std::sort(result.begin(), result.end(), [](const WorkItem& a, const WorkItem& b) { return a.sequence < b.sequence; });
    return result;
}

std::vector<WorkItem> Engine::work_items(std::string_view case_id) const {
    auto record = find_case(case_id);
    std::lock_guard guard(record->mutex);
    std::vector<WorkItem> result;
    for (const auto& id : record->item_order)
        result.push_back(record->items.at(id));
    return result;
}

namespace {

std::string case_of_item(std::string_view item_id) {
    auto dot = item_id.rfind('.');
    return dot == std::string_view::npos ? std::string() : std::string(item_id.substr(0, dot));
}

} // namespace

WorkItem Engine::work_item(std::string_view item_id) const {
    std::shared_ptr<CaseRecord> record;
    try {
        record = find_case(case_of_item(item_id));
    } catch (const EngineError&) {
        throw EngineError(EngineError::Kind::UnknownItem, "unknown work item '" + std::string(item_id) + "'");
    }
    std::lock_guard guard(record->mutex);
    auto it = record->items.find(std::string(item_id));
    if (it == record->items.end())
        throw EngineError(EngineError::Kind::UnknownItem, "unknown work item '" + std::string(item_id) + "'");
    return it->second;
}

void Engine::refresh(CaseRecord& record) {
    const WorkflowNet& net = record.plan->net;
    auto closure = silent_closure(net, record.state.marking, state_cap_);
    auto reachable = reachable_work(net, closure);

    std::set<std::string> covered;
    for (const auto& id : record.item_order) {
        WorkItem& item = record.items.at(id);
        if (!is_open(item.state))
            continue;
        const std::string& transition = record.item_transition.at(id);
        if (reachable.count(transition))
            covered.insert(transition);
        else
            item.state = WorkItemState::Skipped; // withdrawn
    }
    for (const auto& transition : reachable) {
        if (covered.count(transition))
            continue;
        WorkItem item;
        item.id = record.state.id + ".w" + std::to_string(record.next_item++);
        item.case_id = record.state.id;
        item.task_id = *net.transition(transition).label;
        item.role = record.plan->role_of_transition.at(transition);
        item.state = WorkItemState::Enabled;
        item.sequence = next_sequence_++;
        item.state = WorkItemState::Offered;
        record.item_transition[item.id] = transition;
        record.item_order.push_back(item.id);
        record.items.emplace(item.id, std::move(item));
    }

    if (reachable.empty()) {
        const Marking goal = net.final_marking();
        for (std::size_t k = 0; k < closure.size(); ++k) {
            if (closure[k].marking == goal) {
                record.state.marking = goal;
                record.state.status = CaseStatus::Completed;
                break;
            }
        }
    }
}

WorkItem Engine::act(std::string_view item_id, WorkAction action, std::string_view actor) {
    std::shared_ptr<CaseRecord> record;
    try {
        record = find_case(case_of_item(item_id));
    } catch (const EngineError&) {
        throw EngineError(EngineError::Kind::UnknownItem, "unknown work item '" + std::string(item_id) + "'");
    }
    std::lock_guard guard(record->mutex);
    auto it = record->items.find(std::string(item_id));
    if (it == record->items.end())
        throw EngineError(EngineError::Kind::UnknownItem, "unknown work item '" + std::string(item_id) + "'");
    WorkItem& item = it->second;
    const std::string name = "work item " + item.id + " (" + item.task_id + ")";

    if (item.state == WorkItemState::Skipped)
        throw EngineError(EngineError::Kind::StaleItem, name + " is no longer enabled");
    if (item.state == WorkItemState::Completed)
        throw EngineError(EngineError::Kind::IllegalTransition, name + " is already completed");

    const RoleDef* role = record->plan->plan.find_role(item.role);
    if (!role || std::find(role->actors.begin(), role->actors.end(), actor) == role->actors.end())
        throw EngineError(EngineError::Kind::RoleMismatch,
                          "actor '" + std::string(actor) + "' does not play role " + item.role + " required by " + name);

    auto illegal = [&](const char* why) {
        return EngineError(EngineError::Kind::IllegalTransition,
                           "cannot " + std::string(to_string(action)) + " " + name + " in state " +
                               std::string(to_string(item.state)) + ": " + why);
    };
    auto require_owner = [&] {
        if (item.actor && *item.actor != actor)
            throw EngineError(EngineError::Kind::RoleMismatch, name + " is allocated to '" + *item.actor + "'");
    };

    switch (action) {
    case WorkAction::Allocate:
        if (item.state != WorkItemState::Offered && item.state != WorkItemState::Enabled)
            throw illegal("only offered items can be allocated");
        item.state = WorkItemState::Allocated;
        item.actor = std::string(actor);
        return item;
    case WorkAction::Start:
        if (item.state != WorkItemState::Allocated)
            throw illegal("item must be allocated first");
        require_owner();
        item.state = WorkItemState::Started;
        return item;
    case WorkAction::Complete:
        if (item.state != WorkItemState::Started)
            throw illegal("item must be started first");
        require_owner();
        return complete(*record, item);
    case WorkAction::Skip:
        if (item.state != WorkItemState::Offered && item.state != WorkItemState::Enabled)
            throw illegal("only offered items can be skipped");
        return skip(*record, item);
    }
    throw illegal("unknown action");
}

WorkItem Engine::complete(CaseRecord& record, WorkItem& item) {
    const WorkflowNet& net = record.plan->net;
    const Transition& target = net.transition(record.item_transition.at(item.id));
    auto closure = silent_closure(net, record.state.marking, state_cap_);

    // Among silent routes enabling the task, keep the most other open items alive.
    std::optional<std::pair<std::size_t, std::size_t>> best; // (withdrawn count, closure index)
    for (std::size_t k = 0; k < closure.size(); ++k) {
        if (!is_enabled(target, closure[k].marking))
            continue;
        Marking after = fire(net, closure[k].marking, target.id);
        auto still = reachable_work(net, silent_closure(net, after, state_cap_));
        std::size_t withdrawn = 0;
        for (const auto& [id, other] : record.items)
            if (id != item.id && is_open(other.state) && !still.count(record.item_transition.at(id)))
                ++withdrawn;
        if (!best || withdrawn < best->first)
            best = {withdrawn, k};
    }
    if (!best) {
        item.state = WorkItemState::Skipped;
        throw EngineError(EngineError::Kind::StaleItem, "work item " + item.id + " (" + item.task_id + ") is no longer enabled");
    }

    Marking m = record.state.marking;
    for (const Transition* t : path_to(closure, best->second))
        m = fire(net, m, t->id);
    record.state.marking = fire(net, m, target.id);

    item.state = WorkItemState::Completed;
    record.events.push_back(Event{record.state.id, item.task_id, *item.actor, "complete", record.state.clock});
    record.state.clock += kClockStep;
    WorkItem done = item;
    refresh(record);
    return done;
}

WorkItem Engine::skip(CaseRecord& record, WorkItem& item) {
    const WorkflowNet& net = record.plan->net;
    const std::string& target = record.item_transition.at(item.id);
    auto closure = silent_closure(net, record.state.marking, state_cap_);

    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t k = 0; k < closure.size(); ++k) {
        auto still = reachable_work(net, silent_closure(net, closure[k].marking, state_cap_));
        if (still.count(target))
            continue;
        std::size_t withdrawn = 0;
        for (const auto& [id, other] : record.items)
            if (id != item.id && is_open(other.state) && !still.count(record.item_transition.at(id)))
                ++withdrawn;
        if (!best || withdrawn < best->first)
            best = {withdrawn, k};
    }
    if (!best)
        throw EngineError(EngineError::Kind::IllegalTransition,
                          "work item " + item.id + " (" + item.task_id + ") has no bypass and cannot be skipped");

    for (const Transition* t : path_to(closure, best->second))
        record.state.marking = fire(net, record.state.marking, t->id);
    item.state = WorkItemState::Skipped;
    WorkItem done = item;
    refresh(record);
    return done;
}

CaseSnapshot Engine::case_state(std::string_view case_id) const {
    auto record = find_case(case_id);
    std::lock_guard guard(record->mutex);
    CaseSnapshot snap;
    snap.state = record->state;
    snap.event_count = record->events.size();
    for (const auto& t : record->plan->net.transitions())
        if (!t.silent())
            snap.tasks[*t.label] = TaskStatus::Pending;
    for (const auto& id : record->item_order) {
        const WorkItem& item = record->items.at(id);
        TaskStatus status = TaskStatus::Pending;
        switch (item.state) {
        case WorkItemState::Enabled:
        case WorkItemState::Offered: status = TaskStatus::Offered; break;
        case WorkItemState::Allocated: status = TaskStatus::Allocated; break;
        case WorkItemState::Started: status = TaskStatus::Started; break;
        case WorkItemState::Completed: status = TaskStatus::Completed; break;
        case WorkItemState::Skipped: status = TaskStatus::Skipped; break;
        }
        // A completed task stays completed even if a later item for it is withdrawn.
        auto& slot = snap.tasks[item.task_id];
        if (slot != TaskStatus::Completed || status == TaskStatus::Completed)
            slot = status;
    }
    return snap;
}

EventLog Engine::case_log(const std::vector<std::string>& case_ids) const {
    EventLog log;
    for (const auto& id : case_ids) {
        auto record = find_case(id);
        std::lock_guard guard(record->mutex);
        log.traces.push_back(Trace{id, record->events});
    }
    return log;
}

} // namespace crisisflow
