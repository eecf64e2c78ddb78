#pragma once

#include "crisisflow/net.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crisisflow {

struct RoleDef {
    std::string id;
    std::string name;
    std::vector<std::string> actors;

    friend bool operator==(const RoleDef&, const RoleDef&) = default;
};

struct TaskDef {
    std::string id;
    std::string label;
    std::string role;
    int multiplicity = 1;
    bool optional = false;

    friend bool operator==(const TaskDef&, const TaskDef&) = default;
};

// OR gateways are parsed so they can be reported, but plan_to_net rejects them.
enum class GatewayKind { AndSplit, AndJoin, XorSplit, XorJoin, OrSplit, OrJoin };

std::string_view to_string(GatewayKind kind);
std::optional<GatewayKind> gateway_kind_from_string(std::string_view text);

struct Gateway {
    std::string id;
    GatewayKind kind;

    bool is_split() const noexcept {
        return kind == GatewayKind::AndSplit || kind == GatewayKind::XorSplit || kind == GatewayKind::OrSplit;
    }

    friend bool operator==(const Gateway&, const Gateway&) = default;
};

struct Flow {
    std::string from;
    std::string to;

    friend bool operator==(const Flow&, const Flow&) = default;
    friend auto operator<=>(const Flow&, const Flow&) = default;
};

struct Plan {
    std::string id;
    std::vector<RoleDef> roles;
    std::vector<TaskDef> tasks;
    std::vector<Gateway> gateways;
    std::vector<Flow> flows;
    /// Annotations. A message flow joining a task without outgoing sequence
    /// flow to a task without incoming sequence flow also orders them.
    std::vector<Flow> message_flows;

    const RoleDef* find_role(std::string_view role_id) const;
    const TaskDef* find_task(std::string_view task_id) const;
    const Gateway* find_gateway(std::string_view gateway_id) const;

    friend bool operator==(const Plan&, const Plan&) = default;
};

struct Violation {
    enum class Kind { Reference, Structure, Duplicate, Role, Multiplicity, Identifier };

    Kind kind;
    /// Offending node ids (task, gateway, role or flow endpoint).
    std::vector<std::string> nodes;
    std::string message;
};

std::string_view to_string(Violation::Kind kind);

/// Sequence flows plus the message flows that act as sequence flows.
std::vector<Flow> effective_flows(const Plan& plan);

/// Reads the JSON plan format without checking plan invariants. Throws
/// PlanError(Syntax) with the byte offset or JSON path of the problem.
Plan read_plan_document(std::string_view text);

/// read_plan_document followed by validate_plan; the first violation is
/// raised as PlanError(Reference) or PlanError(Structure).
Plan parse_plan(std::string_view text);

std::string serialize_plan(const Plan& plan);

/// Empty iff every plan invariant holds.
std::vector<Violation> validate_plan(const Plan& plan);

/// Compiles a valid plan into a workflow net. Visible transitions carry the
/// task id as label (with `#k` suffixes for multi-instance tasks); every other
/// transition is silent. Throws PlanError(Compile) for OR gateways and
/// PlanError(Structure) when the plan does not validate.
WorkflowNet plan_to_net(const Plan& plan);

} // namespace crisisflow
