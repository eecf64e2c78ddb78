#include "crisisflow/plan.hpp"

#include "crisisflow/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include <json.hpp>

namespace crisisflow {

namespace {

constexpr std::pair<GatewayKind, std::string_view> kGatewayNames[] = {
    {GatewayKind::AndSplit, "AND-split"}, {GatewayKind::AndJoin, "AND-join"},
    {GatewayKind::XorSplit, "XOR-split"}, {GatewayKind::XorJoin, "XOR-join"},
    {GatewayKind::OrSplit, "OR-split"},   {GatewayKind::OrJoin, "OR-join"},
};

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
    auto it = std::find_if(items.begin(), items.end(), [&](const T& item) { return item.id == id; });
    return it == items.end() ? nullptr : &*it;
}

} // namespace

std::string_view to_string(GatewayKind kind) {
    for (const auto& [k, name] : kGatewayNames)
        if (k == kind)
            return name;
    return "?";
}

std::optional<GatewayKind> gateway_kind_from_string(std::string_view text) {
    for (const auto& [k, name] : kGatewayNames)
        if (name == text)
            return k;
    return std::nullopt;
}

std::string_view to_string(Violation::Kind kind) {
    switch (kind) {
    case Violation::Kind::Reference: return "reference";
    case Violation::Kind::Structure: return "structure";
    case Violation::Kind::Duplicate: return "duplicate";
    case Violation::Kind::Role: return "role";
    case Violation::Kind::Multiplicity: return "multiplicity";
    case Violation::Kind::Identifier: return "identifier";
    }
    return "?";
}

const RoleDef* Plan::find_role(std::string_view role_id) const { return find_by_id(roles, role_id); }
const TaskDef* Plan::find_task(std::string_view task_id) const { return find_by_id(tasks, task_id); }
const Gateway* Plan::find_gateway(std::string_view gateway_id) const { return find_by_id(gateways, gateway_id); }

std::vector<Flow> effective_flows(const Plan& plan) {
    std::vector<Flow> result = plan.flows;
    std::set<std::string> has_out, has_in;
    for (const auto& f : plan.flows) {
        has_out.insert(f.from);
        has_in.insert(f.to);
    }
    for (const auto& m : plan.message_flows) {
        if (!plan.find_task(m.from) || !plan.find_task(m.to))
            continue;
        if (has_out.count(m.from) || has_in.count(m.to))
            continue;
        result.push_back(m);
        has_out.insert(m.from);
        has_in.insert(m.to);
    }
    return result;
}

// --- JSON carrier ---------------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw PlanError(PlanError::Kind::Syntax, "plan document at " + path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object())
        schema_error(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        schema_error(path, std::string("missing key '") + key + "'");
    return *it;
}

std::string string_at(const json& obj, const char* key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_string())
        schema_error(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

const json& array_at(const json& obj, const char* key, const std::string& path, bool optional) {
    static const json empty = json::array();
    if (optional && obj.is_object() && !obj.contains(key))
        return empty;
    const json& v = require(obj, key, path);
    if (!v.is_array())
        schema_error(path + "/" + key, "expected an array");
    return v;
}

std::vector<Flow> flows_at(const json& doc, const char* key) {
    std::vector<Flow> flows;
    const json& arr = array_at(doc, key, "", true);
    for (std::size_t k = 0; k < arr.size(); ++k) {
        std::string path = std::string("/") + key + "/" + std::to_string(k);
        flows.push_back({string_at(arr[k], "from", path), string_at(arr[k], "to", path)});
    }
    return flows;
}

} // namespace

Plan read_plan_document(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw PlanError(PlanError::Kind::Syntax,
                        "plan document: JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object())
        schema_error("/", "expected an object");

    Plan plan;
    plan.id = string_at(doc, "id", "");

    const json& roles = array_at(doc, "roles", "", false);
    for (std::size_t k = 0; k < roles.size(); ++k) {
        std::string path = "/roles/" + std::to_string(k);
        RoleDef role{string_at(roles[k], "id", path), string_at(roles[k], "name", path), {}};
        const json& actors = array_at(roles[k], "actors", path, false);
        for (std::size_t a = 0; a < actors.size(); ++a) {
            if (!actors[a].is_string())
                schema_error(path + "/actors/" + std::to_string(a), "expected a string");
            role.actors.push_back(actors[a].get<std::string>());
        }
        plan.roles.push_back(std::move(role));
    }

    const json& tasks = array_at(doc, "tasks", "", false);
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        std::string path = "/tasks/" + std::to_string(k);
        const json& t = tasks[k];
        TaskDef task{string_at(t, "id", path), string_at(t, "label", path), string_at(t, "role", path)};
        if (t.contains("multiplicity")) {
            if (!t["multiplicity"].is_number_integer())
                schema_error(path + "/multiplicity", "expected an integer");
            task.multiplicity = t["multiplicity"].get<int>();
        }
        if (t.contains("optional")) {
            if (!t["optional"].is_boolean())
                schema_error(path + "/optional", "expected a boolean");
            task.optional = t["optional"].get<bool>();
        }
        plan.tasks.push_back(std::move(task));
    }

    const json& gateways = array_at(doc, "gateways", "", true);
    for (std::size_t k = 0; k < gateways.size(); ++k) {
        std::string path = "/gateways/" + std::to_string(k);
        std::string kind_text = string_at(gateways[k], "kind", path);
        auto kind = gateway_kind_from_string(kind_text);
        if (!kind)
            schema_error(path + "/kind", "unknown gateway kind '" + kind_text + "'");
        plan.gateways.push_back({string_at(gateways[k], "id", path), *kind});
    }

    plan.flows = flows_at(doc, "flows");
    plan.message_flows = flows_at(doc, "messageFlows");
    return plan;
}

Plan parse_plan(std::string_view text) {
    Plan plan = read_plan_document(text);
    auto violations = validate_plan(plan);
    if (!violations.empty()) {
        auto ref = std::find_if(violations.begin(), violations.end(),
                                [](const Violation& v) { return v.kind == Violation::Kind::Reference; });
        if (ref != violations.end())
            throw PlanError(PlanError::Kind::Reference, "plan '" + plan.id + "': " + ref->message);
        throw PlanError(PlanError::Kind::Structure, "plan '" + plan.id + "': " + violations.front().message);
    }
    return plan;
}

std::string serialize_plan(const Plan& plan) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["id"] = plan.id;
    doc["roles"] = ordered_json::array();
    for (const auto& r : plan.roles)
        doc["roles"].push_back({{"id", r.id}, {"name", r.name}, {"actors", r.actors}});
    doc["tasks"] = ordered_json::array();
    for (const auto& t : plan.tasks) {
        ordered_json entry{{"id", t.id}, {"label", t.label}, {"role", t.role}};
        if (t.multiplicity != 1)
            entry["multiplicity"] = t.multiplicity;
        if (t.optional)
            entry["optional"] = true;
        doc["tasks"].push_back(std::move(entry));
    }
    doc["gateways"] = ordered_json::array();
    for (const auto& g : plan.gateways)
        doc["gateways"].push_back({{"id", g.id}, {"kind", std::string(to_string(g.kind))}});
    auto flows = [](const std::vector<Flow>& list) {
        ordered_json arr = ordered_json::array();
        for (const auto& f : list)
            arr.push_back({{"from", f.from}, {"to", f.to}});
        return arr;
    };
    doc["flows"] = flows(plan.flows);
    doc["messageFlows"] = flows(plan.message_flows);
    return doc.dump(2) + "\n";
}

// --- validation -----------------------------------------------------------

std::vector<Violation> validate_plan(const Plan& plan) {
    std::vector<Violation> out;
    auto report = [&](Violation::Kind kind, std::vector<std::string> nodes, std::string message) {
        out.push_back({kind, std::move(nodes), std::move(message)});
    };

    std::set<std::string> role_ids;
    for (const auto& r : plan.roles) {
        if (!role_ids.insert(r.id).second)
            report(Violation::Kind::Duplicate, {r.id}, "duplicate role id '" + r.id + "'");
        if (r.actors.empty())
            report(Violation::Kind::Role, {r.id}, "role '" + r.id + "' has no actors");
    }

    std::set<std::string> node_ids;
    auto check_identifier = [&](const std::string& id) {
        if (id.empty() || id == "i" || id == "o" || id.find_first_of(":#") != std::string::npos)
            report(Violation::Kind::Identifier, {id}, "node id '" + id + "' is empty, reserved or contains ':'/'#'");
    };
    for (const auto& t : plan.tasks) {
        check_identifier(t.id);
        if (!node_ids.insert(t.id).second)
            report(Violation::Kind::Duplicate, {t.id}, "duplicate node id '" + t.id + "'");
        if (!plan.find_role(t.role))
            report(Violation::Kind::Reference, {t.id, t.role},
                   "task '" + t.id + "' references unknown role '" + t.role + "'");
        if (t.multiplicity < 1)
            report(Violation::Kind::Multiplicity, {t.id}, "task '" + t.id + "' has multiplicity < 1");
    }
    for (const auto& g : plan.gateways) {
        check_identifier(g.id);
        if (!node_ids.insert(g.id).second)
            report(Violation::Kind::Duplicate, {g.id}, "duplicate node id '" + g.id + "'");
    }

    bool dangling = false;
    auto check_endpoints = [&](const std::vector<Flow>& flows, const char* what) {
        for (const auto& f : flows) {
            for (const auto* end : {&f.from, &f.to}) {
                if (!node_ids.count(*end)) {
                    dangling = true;
                    report(Violation::Kind::Reference, {*end},
                           std::string(what) + " " + f.from + "->" + f.to + " references unknown node '" + *end + "'");
                }
            }
        }
    };
    check_endpoints(plan.flows, "flow");
    check_endpoints(plan.message_flows, "message flow");

    if (node_ids.empty()) {
        report(Violation::Kind::Structure, {}, "plan has no tasks or gateways");
        return out;
    }

    std::map<std::string, std::vector<std::string>> succ, pred;
    for (const auto& id : node_ids) {
        succ[id];
        pred[id];
    }
    for (const auto& f : effective_flows(plan)) {
        if (!node_ids.count(f.from) || !node_ids.count(f.to))
            continue;
        succ[f.from].push_back(f.to);
        pred[f.to].push_back(f.from);
    }

    std::vector<std::string> starts, ends;
    for (const auto& id : node_ids) {
        if (pred[id].empty())
            starts.push_back(id);
        if (succ[id].empty())
            ends.push_back(id);
    }
    if (starts.size() != 1)
        report(Violation::Kind::Structure, starts,
               starts.empty() ? std::string("plan has no start node")
                              : "plan has " + std::to_string(starts.size()) + " start nodes");
    if (ends.size() != 1)
        report(Violation::Kind::Structure, ends,
               ends.empty() ? std::string("plan has no end node")
                            : "plan has " + std::to_string(ends.size()) + " end nodes");

    for (const auto& g : plan.gateways) {
        std::size_t in = pred[g.id].size(), outs = succ[g.id].size();
        bool ok = g.is_split() ? (in <= 1 && outs >= 2) : (in >= 2 && outs <= 1);
        if (!ok)
            report(Violation::Kind::Structure, {g.id},
                   std::string(to_string(g.kind)) + " '" + g.id + "' has " + std::to_string(in) + " incoming and " +
                       std::to_string(outs) + " outgoing flows");
    }
    for (const auto& t : plan.tasks) {
        if (pred[t.id].size() > 1 || succ[t.id].size() > 1)
            report(Violation::Kind::Structure, {t.id},
                   "task '" + t.id + "' must have at most one incoming and one outgoing flow");
    }

    if (starts.size() == 1 && ends.size() == 1 && !dangling) {
        auto sweep = [](const std::string& from, std::map<std::string, std::vector<std::string>>& adj) {
            std::set<std::string> seen{from};
            std::deque<std::string> queue{from};
            while (!queue.empty()) {
                auto node = queue.front();
                queue.pop_front();
                for (const auto& next : adj[node])
                    if (seen.insert(next).second)
                        queue.push_back(next);
            }
            return seen;
        };
        auto forward = sweep(starts.front(), succ);
        auto backward = sweep(ends.front(), pred);
        for (const auto& id : node_ids) {
            if (!forward.count(id) || !backward.count(id))
                report(Violation::Kind::Structure, {id}, "node '" + id + "' is not on a path from start to end");
        }
    }
    return out;
}

} // namespace crisisflow
