// Plan -> workflow net compilation.
//
// Every plan node exposes an entry port and an exit port, each either a place
// or a transition. Tasks and AND gateways are transition-like, XOR gateways are
// place-like, optional tasks are bracketed by places. A flow then becomes:
//   transition -> place / place -> transition : a single arc
//   transition -> transition                  : an intermediate place
//   place -> place                            : a silent transition

#include "crisisflow/plan.hpp"

#include "crisisflow/error.hpp"

#include <map>

namespace crisisflow {

namespace {

struct Port {
    bool is_place;
    std::string id;
};

struct NodePorts {
    Port entry;
    Port exit;
};

std::string instance_label(const TaskDef& task, int k) {
    return task.multiplicity == 1 ? task.id : task.id + "#" + std::to_string(k);
}

class Compiler {
public:
    explicit Compiler(const Plan& plan) : plan_(plan) {}

    WorkflowNet run() {
        for (const auto& g : plan_.gateways) {
            if (g.kind == GatewayKind::OrSplit || g.kind == GatewayKind::OrJoin)
                throw PlanError(PlanError::Kind::Compile,
                                "gateway '" + g.id + "': " + std::string(to_string(g.kind)) + " is not supported");
        }
        auto violations = validate_plan(plan_);
        if (!violations.empty())
            throw PlanError(PlanError::Kind::Structure,
                            "plan '" + plan_.id + "' does not validate: " + violations.front().message);

        for (const auto& t : plan_.tasks)
            ports_[t.id] = compile_task(t);
        for (const auto& g : plan_.gateways)
            ports_[g.id] = compile_gateway(g);

        std::map<std::string, int> in_degree, out_degree;
        auto flows = effective_flows(plan_);
        for (const auto& f : flows) {
            ++out_degree[f.from];
            ++in_degree[f.to];
            connect(ports_.at(f.from).exit, ports_.at(f.to).entry, f.from + "->" + f.to);
        }

        for (const auto& [id, ports] : ports_) {
            if (in_degree[id] == 0)
                connect(Port{true, net_.source()}, ports.entry, net_.source() + "->" + id);
            if (out_degree[id] == 0)
                connect(ports.exit, Port{true, net_.sink()}, id + "->" + net_.sink());
        }

        auto broken = net_.structural_violations();
        if (!broken.empty())
            throw PlanError(PlanError::Kind::Compile, "compiled net is malformed: " + broken.front());
        return std::move(net_);
    }

private:
    NodePorts compile_task(const TaskDef& task) {
        Port entry, exit;
        if (task.multiplicity == 1) {
            net_.add_transition(task.id, task.id);
            entry = exit = Port{false, task.id};
        } else {
            // Static multi-instance: fork, k concurrent labelled copies, join.
            std::string fork = "fork:" + task.id, join = "join:" + task.id;
            net_.add_transition(fork, std::nullopt);
            net_.add_transition(join, std::nullopt);
            for (int k = 1; k <= task.multiplicity; ++k) {
                std::string label = instance_label(task, k);
                std::string before = "mi:" + label, after = "mo:" + label;
                net_.add_place(before);
                net_.add_place(after);
                net_.add_transition(label, label);
                net_.add_arc(fork, before);
                net_.add_arc(before, label);
                net_.add_arc(label, after);
                net_.add_arc(after, join);
            }
            entry = Port{false, fork};
            exit = Port{false, join};
        }
        if (!task.optional)
            return {entry, exit};

        std::string pre = "pre:" + task.id, post = "post:" + task.id, skip = "skip:" + task.id;
        net_.add_place(pre);
        net_.add_place(post);
        net_.add_transition(skip, std::nullopt);
        net_.add_arc(pre, skip);
        net_.add_arc(skip, post);
        net_.add_arc(pre, entry.id);
        net_.add_arc(exit.id, post);
        return {Port{true, pre}, Port{true, post}};
    }

    NodePorts compile_gateway(const Gateway& g) {
        if (g.kind == GatewayKind::AndSplit || g.kind == GatewayKind::AndJoin) {
            std::string id = "and:" + g.id;
            net_.add_transition(id, std::nullopt);
            return {Port{false, id}, Port{false, id}};
        }
        std::string id = "xor:" + g.id;
        net_.add_place(id);
        return {Port{true, id}, Port{true, id}};
    }

    void connect(const Port& from, const Port& to, const std::string& edge) {
        if (from.is_place != to.is_place) {
            net_.add_arc(from.id, to.id);
        } else if (!from.is_place) {
            std::string place = "p:" + edge;
            net_.add_place(place);
            net_.add_arc(from.id, place);
            net_.add_arc(place, to.id);
        } else {
            std::string tau = "tau:" + edge;
            net_.add_transition(tau, std::nullopt);
            net_.add_arc(from.id, tau);
            net_.add_arc(tau, to.id);
        }
    }

    const Plan& plan_;
    WorkflowNet net_;
    std::map<std::string, NodePorts> ports_;
};

} // namespace

WorkflowNet plan_to_net(const Plan& plan) { return Compiler(plan).run(); }

} // namespace crisisflow
