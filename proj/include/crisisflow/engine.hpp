#pragma once

#include "crisisflow/event_log.hpp"
#include "crisisflow/net.hpp"
#include "crisisflow/plan.hpp"
#include "crisisflow/reachability.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace crisisflow {

enum class CaseStatus { Running, Completed };

enum class WorkItemState { Enabled, Offered, Allocated, Started, Completed, Skipped };

enum class WorkAction { Allocate, Start, Complete, Skip };

enum class TaskStatus { Pending, Offered, Allocated, Started, Completed, Skipped };

std::string_view to_string(CaseStatus s);
std::string_view to_string(WorkItemState s);
std::string_view to_string(WorkAction a);
std::string_view to_string(TaskStatus s);
std::optional<WorkAction> work_action_from_string(std::string_view text);

struct Case {
    std::string id;
    std::string plan_id;
    Marking marking;
    CaseStatus status = CaseStatus::Running;
    Timestamp clock{};
};

struct WorkItem {
    std::string id;
    std::string case_id;
    /// Task instance label (`T8'`, or `T#2` for multi-instance tasks).
    std::string task_id;
    std::string role;
    WorkItemState state = WorkItemState::Offered;
    std::optional<std::string> actor;
    /// Global creation order.
    std::uint64_t sequence = 0;
};

struct CaseSnapshot {
    Case state;
    /// Status per task instance label.
    std::map<std::string, TaskStatus> tasks;
    std::size_t event_count = 0;
};

/// Owns running cases. Each case is guarded by its own mutex, so different
/// cases progress concurrently while actions on one case are serialized.
///
/// Silent transitions (gateways, bypasses) never surface as work. A task is
/// offered once it is enabled in the marking or after some sequence of silent
/// firings. Completing or skipping an item resolves those silent choices,
/// preferring the route that withdraws the fewest other open items. Items
/// whose task can no longer be reached are withdrawn (state `skipped`) and
/// reject further actions with a stale-item error.
class Engine {
public:
    explicit Engine(std::size_t state_cap = kDefaultStateCap);
    ~Engine();

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    /// Validates and compiles the plan. Re-registering an identical plan is a
    /// no-op; a different plan under an existing id is a validation error.
    void register_plan(const Plan& plan);
    std::vector<std::string> plan_ids() const;
    std::optional<Plan> find_plan(std::string_view plan_id) const;
    const WorkflowNet& net(std::string_view plan_id) const;

    Case create_case(const Plan& plan);
    Case create_case(std::string_view plan_id);
    std::vector<std::string> case_ids() const;

    /// Open items of `role` (offered, or allocated/started to one of its
    /// actors) across running cases, in creation order.
    std::vector<WorkItem> worklist(std::string_view role) const;
    std::vector<WorkItem> work_items(std::string_view case_id) const;
    WorkItem work_item(std::string_view item_id) const;

    WorkItem act(std::string_view item_id, WorkAction action, std::string_view actor);

    CaseSnapshot case_state(std::string_view case_id) const;
    /// Event streams of the given cases, in the given order.
    EventLog case_log(const std::vector<std::string>& case_ids) const;

private:
    struct CompiledPlan;
    struct CaseRecord;

    std::shared_ptr<CaseRecord> find_case(std::string_view case_id) const;
    std::shared_ptr<const CompiledPlan> compiled(std::string_view plan_id) const;
    void refresh(CaseRecord& record);
    WorkItem complete(CaseRecord& record, WorkItem& item);
    WorkItem skip(CaseRecord& record, WorkItem& item);

    std::size_t state_cap_;
    mutable std::shared_mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<const CompiledPlan>, std::less<>> plans_;
    std::map<std::string, std::shared_ptr<CaseRecord>, std::less<>> cases_;
    std::uint64_t next_case_ = 1;
    std::atomic<std::uint64_t> next_sequence_{1};
};

struct SimulationPolicy {
    std::uint64_t seed = 0;
    std::chrono::seconds think_time = kClockStep;
    /// Firings per case before the case is declared non-completing.
    std::size_t max_steps = 100'000;
};

/// Runs `n_cases` cases of the compiled plan to completion. One seeded
/// stream drives every decision; per step it is consumed first for each
/// marked place with two or more enabled consumers (in place id order, one
/// draw picks that place's winner), then once to pick the transition to fire
/// among those that won all their contested places. Visible firings become
/// "complete" events performed by the lexicographically first actor of the
/// task's role, stamped with a per-case clock starting at clock_epoch().
/// Case ids are "1".."n". Throws EngineError(NonCompletion) on deadlock.
EventLog auto_simulate(const Plan& plan, std::size_t n_cases, const SimulationPolicy& policy);

} // namespace crisisflow
