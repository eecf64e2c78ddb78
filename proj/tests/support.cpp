#include "support.hpp"

#include <utility>

namespace crisisflow::testing {

namespace {

struct PlanBuilder {
    Rng& rng;
    Plan plan;
    std::size_t budget;
    int counter = 0;

    std::string fresh(const char* prefix) { return prefix + std::to_string(++counter); }

    std::string add_task() {
        TaskDef t;
        t.id = fresh("t");
        t.label = "task " + t.id;
        t.role = plan.roles[rng.below(plan.roles.size())].id;
        if (rng.chance(15))
            t.multiplicity = 2 + static_cast<int>(rng.below(2));
        t.optional = rng.chance(15);
        plan.tasks.push_back(t);
        if (budget > 0)
            --budget;
        return t.id;
    }

    // Returns (entry, exit) node ids of a single-entry single-exit block.
    std::pair<std::string, std::string> block(int depth) {
        std::size_t pick = budget <= 1 || depth > 3 ? 0 : rng.below(4);
        if (pick == 0) {
            auto t = add_task();
            return {t, t};
        }
        if (pick == 1) {
            auto first = block(depth + 1);
            auto second = block(depth + 1);
            plan.flows.push_back({first.second, second.first});
            return {first.first, second.second};
        }
        bool parallel = pick == 2;
        auto split = fresh(parallel ? "and" : "xor");
        auto join = fresh(parallel ? "and" : "xor");
        plan.gateways.push_back({split, parallel ? GatewayKind::AndSplit : GatewayKind::XorSplit});
        plan.gateways.push_back({join, parallel ? GatewayKind::AndJoin : GatewayKind::XorJoin});
        std::size_t branches = 2 + rng.below(2);
        for (std::size_t b = 0; b < branches; ++b) {
            auto inner = block(depth + 1);
            plan.flows.push_back({split, inner.first});
            plan.flows.push_back({inner.second, join});
        }
        return {split, join};
    }
};

} // namespace

Plan random_plan(Rng& rng, std::size_t max_tasks) {
    PlanBuilder b{rng, {}, 1 + rng.below(max_tasks)};
    b.plan.id = "random";
    std::size_t roles = 1 + rng.below(3);
    for (std::size_t r = 0; r < roles; ++r) {
        std::string id = "R" + std::to_string(r + 1);
        b.plan.roles.push_back({id, "role " + id, {"actor-" + id}});
    }
    b.block(0);
    return b.plan;
}

WorkflowNet random_net(Rng& rng, std::size_t max_places) {
    WorkflowNet net;
    std::vector<std::string> places{"i", "o"};
    std::size_t inner = rng.below(max_places - 1);
    for (std::size_t k = 1; k <= inner; ++k)
        places.push_back("p" + std::to_string(k));
    for (const auto& p : places)
        net.add_place(p);
    std::size_t transitions = 1 + rng.below(6);
    for (std::size_t k = 1; k <= transitions; ++k) {
        std::string id = "t" + std::to_string(k);
        net.add_transition(id, rng.chance(70) ? std::optional<std::string>(id) : std::nullopt);
        std::size_t ins = 1 + rng.below(2), outs = 1 + rng.below(2);
        for (std::size_t a = 0; a < ins; ++a) {
            const auto& p = places[rng.below(places.size())];
            if (p != "o")
                net.add_arc(p, id);
        }
        for (std::size_t a = 0; a < outs; ++a) {
            const auto& p = places[rng.below(places.size())];
            if (p != "i")
                net.add_arc(id, p);
        }
    }
    return net;
}

std::vector<ActivitySequence> random_traces(Rng& rng, std::size_t alphabet) {
    std::vector<ActivitySequence> traces(rng.below(6));
    for (auto& t : traces) {
        std::size_t len = rng.below(8);
        for (std::size_t k = 0; k < len; ++k)
            t.push_back(std::string(1, static_cast<char>('a' + rng.below(alphabet))));
    }
    return traces;
}

EventLog random_resource_log(Rng& rng) {
    EventLog log;
    std::size_t cases = rng.below(6);
    Timestamp clock = clock_epoch();
    for (std::size_t c = 0; c < cases; ++c) {
        Trace t{"case" + std::to_string(c), {}};
        std::size_t len = rng.below(10);
        for (std::size_t k = 0; k < len; ++k) {
            clock += kClockStep;
            t.events.push_back({t.case_id, "act" + std::to_string(rng.below(5)), "R" + std::to_string(rng.below(4)),
                                "complete", clock});
        }
        log.traces.push_back(std::move(t));
    }
    return log;
}

Plan single_task_plan(const std::string& task) {
    Plan p;
    p.id = "single";
    p.roles.push_back({"R", "Responder", {"alice"}});
    p.tasks.push_back({task, "Do it", "R"});
    return p;
}

Plan and_diamond_plan() {
    Plan p;
    p.id = "and-diamond";
    p.roles.push_back({"R", "Responder", {"alice", "bob"}});
    p.tasks.push_back({"a", "A", "R"});
    p.tasks.push_back({"b", "B", "R"});
    p.gateways.push_back({"split", GatewayKind::AndSplit});
    p.gateways.push_back({"join", GatewayKind::AndJoin});
    p.flows = {{"split", "a"}, {"split", "b"}, {"a", "join"}, {"b", "join"}};
    return p;
}

Plan xor_diamond_plan() {
    Plan p = and_diamond_plan();
    p.id = "xor-diamond";
    p.gateways = {{"split", GatewayKind::XorSplit}, {"join", GatewayKind::XorJoin}};
    return p;
}

WorkflowNet chain_net(const std::vector<std::string>& labels) {
    WorkflowNet net;
    net.add_place("i");
    net.add_place("o");
    std::string prev = "i";
    for (std::size_t k = 0; k < labels.size(); ++k) {
        net.add_transition(labels[k], labels[k]);
        net.add_arc(prev, labels[k]);
        std::string next = k + 1 == labels.size() ? "o" : "p" + std::to_string(k + 1);
        net.add_place(next);
        net.add_arc(labels[k], next);
        prev = next;
    }
    return net;
}

} // namespace crisisflow::testing
