#include "crisisflow/error.hpp"
#include "crisisflow/plan.hpp"
#include "crisisflow/reachability.hpp"

#include "support.hpp"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

using namespace crisisflow;
using crisisflow::testing::Rng;

namespace {

const char* kMinimal = R"({
  "id": "minimal",
  "roles": [{"id": "R", "name": "Responder", "actors": ["alice"]}],
  "tasks": [{"id": "T", "label": "Respond", "role": "R"}],
  "gateways": [],
  "flows": [],
  "messageFlows": []
})";

PlanError::Kind parse_error_kind(const std::string& text) {
    try {
        parse_plan(text);
    } catch (const PlanError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for " << text;
    return PlanError::Kind::Compile;
}

// Visible label sequences of every firing sequence from {i:1} that ends in {o:1}.
void enumerate(const WorkflowNet& net, const Marking& m, std::vector<std::string>& labels,
               std::set<std::vector<std::string>>& out) {
    if (m == net.final_marking()) {
        out.insert(labels);
        return;
    }
    for (const auto& id : enabled_transitions(net, m)) {
        const auto& t = net.transition(id);
        if (t.label)
            labels.push_back(*t.label);
        enumerate(net, fire(net, m, id), labels, out);
        if (t.label)
            labels.pop_back();
    }
}

std::set<std::vector<std::string>> complete_sequences(const WorkflowNet& net) {
    std::set<std::vector<std::string>> out;
    std::vector<std::string> labels;
    enumerate(net, net.initial_marking(), labels, out);
    return out;
}

} // namespace

TEST(ParsePlan, Minimal) {
    Plan p = parse_plan(kMinimal);
    EXPECT_EQ(p.id, "minimal");
    EXPECT_EQ(p.tasks.size(), 1u);
    EXPECT_TRUE(p.gateways.empty());
    EXPECT_EQ(p.roles.front().actors, std::vector<std::string>{"alice"});
    EXPECT_EQ(p.tasks.front().multiplicity, 1);
    EXPECT_FALSE(p.tasks.front().optional);
}

TEST(ParsePlan, SyntaxErrorsReportPosition) {
    try {
        parse_plan("{\"id\": \"x\", ");
        FAIL();
    } catch (const PlanError& e) {
        EXPECT_EQ(e.kind(), PlanError::Kind::Syntax);
        EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos) << e.what();
    }
    try {
        parse_plan(R"({"id":"x","roles":[],"tasks":[{"id":"T","label":"L","role":7}],"gateways":[],"flows":[]})");
        FAIL();
    } catch (const PlanError& e) {
        EXPECT_EQ(e.kind(), PlanError::Kind::Syntax);
        EXPECT_NE(std::string(e.what()).find("/tasks/0/role"), std::string::npos) << e.what();
    }
    EXPECT_EQ(parse_error_kind(R"({"id":"x","roles":[],"tasks":[],"gateways":[{"id":"g","kind":"NOR"}],"flows":[]})"),
              PlanError::Kind::Syntax);
}

TEST(ParsePlan, DanglingFlowIsReferenceError) {
    Plan p = parse_plan(kMinimal);
    p.flows.push_back({"T", "T99"});
    EXPECT_EQ(parse_error_kind(serialize_plan(p)), PlanError::Kind::Reference);
}

TEST(ParsePlan, UnknownRoleIsReferenceError) {
    Plan p = parse_plan(kMinimal);
    p.tasks.front().role = "A99";
    EXPECT_EQ(parse_error_kind(serialize_plan(p)), PlanError::Kind::Reference);
}

TEST(ParsePlan, TwoStartsIsStructureError) {
    Plan p = parse_plan(kMinimal);
    p.tasks.push_back({"U", "Other", "R"});
    EXPECT_EQ(parse_error_kind(serialize_plan(p)), PlanError::Kind::Structure);
}

TEST(ValidatePlan, MinimalIsValid) { EXPECT_TRUE(validate_plan(parse_plan(kMinimal)).empty()); }

TEST(ValidatePlan, TwoEndNodesNamedTogether) {
    Plan p = crisisflow::testing::single_task_plan("a");
    p.tasks.push_back({"b", "B", "R"});
    p.tasks.push_back({"c", "C", "R"});
    p.gateways.push_back({"split", GatewayKind::AndSplit});
    p.flows = {{"a", "split"}, {"split", "b"}, {"split", "c"}};
    auto violations = validate_plan(p);
    auto it = std::find_if(violations.begin(), violations.end(), [](const Violation& v) {
        return v.kind == Violation::Kind::Structure && v.nodes.size() == 2;
    });
    ASSERT_NE(it, violations.end());
    EXPECT_EQ(it->nodes, (std::vector<std::string>{"b", "c"}));
}

TEST(ValidatePlan, Invariants) {
    Plan p = crisisflow::testing::single_task_plan();
    p.roles.push_back({"R", "Again", {"bob"}});
    p.roles.push_back({"E", "Empty", {}});
    p.tasks.front().multiplicity = 0;
    std::set<Violation::Kind> kinds;
    for (const auto& v : validate_plan(p))
        kinds.insert(v.kind);
    EXPECT_TRUE(kinds.count(Violation::Kind::Duplicate));
    EXPECT_TRUE(kinds.count(Violation::Kind::Role));
    EXPECT_TRUE(kinds.count(Violation::Kind::Multiplicity));

    Plan q = crisisflow::testing::single_task_plan("bad:id");
    EXPECT_EQ(validate_plan(q).front().kind, Violation::Kind::Identifier);
}

TEST(ValidatePlan, GatewayArity) {
    Plan p = crisisflow::testing::and_diamond_plan();
    p.flows.erase(std::find(p.flows.begin(), p.flows.end(), Flow{"split", "b"}));
    p.flows.push_back({"b", "a"});
    EXPECT_FALSE(validate_plan(p).empty());
}

TEST(Serialize, DefaultsAreOmitted) {
    std::string text = serialize_plan(crisisflow::testing::single_task_plan());
    EXPECT_EQ(text.find("multiplicity"), std::string::npos);
    EXPECT_EQ(text.find("optional"), std::string::npos);
    EXPECT_NE(text.find("\"messageFlows\""), std::string::npos);
}

TEST(PlanProperty, RoundTrip) {
    Rng rng(4242);
    for (int k = 0; k < 200; ++k) {
        Plan p = crisisflow::testing::random_plan(rng);
        ASSERT_TRUE(validate_plan(p).empty()) << serialize_plan(p);
        ASSERT_EQ(parse_plan(serialize_plan(p)), p);
    }
}

TEST(Compile, SingleTask) {
    WorkflowNet net = plan_to_net(crisisflow::testing::single_task_plan("T1"));
    EXPECT_EQ(net.places().size(), 2u);
    ASSERT_EQ(net.transitions().size(), 1u);
    EXPECT_EQ(net.transitions().front().label, "T1");
    EXPECT_EQ(net.transitions().front().inputs, std::vector<std::string>{"i"});
    EXPECT_EQ(net.transitions().front().outputs, std::vector<std::string>{"o"});
}

TEST(Compile, AndDiamondAllowsBothOrders) {
    auto seqs = complete_sequences(plan_to_net(crisisflow::testing::and_diamond_plan()));
    EXPECT_EQ(seqs, (std::set<std::vector<std::string>>{{"a", "b"}, {"b", "a"}}));
}

TEST(Compile, XorDiamondAllowsOneBranch) {
    auto seqs = complete_sequences(plan_to_net(crisisflow::testing::xor_diamond_plan()));
    EXPECT_EQ(seqs, (std::set<std::vector<std::string>>{{"a"}, {"b"}}));
}

TEST(Compile, OptionalTaskMayBeSkipped) {
    Plan p = crisisflow::testing::single_task_plan("a");
    p.tasks.push_back({"b", "B", "R", 1, true});
    p.tasks.push_back({"c", "C", "R"});
    p.flows = {{"a", "b"}, {"b", "c"}};
    auto seqs = complete_sequences(plan_to_net(p));
    EXPECT_EQ(seqs, (std::set<std::vector<std::string>>{{"a", "b", "c"}, {"a", "c"}}));
}

TEST(Compile, MultiplicityInstancesAreConcurrent) {
    Plan p = crisisflow::testing::single_task_plan("T");
    p.tasks.front().multiplicity = 2;
    WorkflowNet net = plan_to_net(p);
    EXPECT_EQ(net.visible_count(), 2u);
    ASSERT_NE(net.find_by_label("T#1"), nullptr);
    ASSERT_NE(net.find_by_label("T#2"), nullptr);

    // After the fan-out fires, both instances are enabled at once.
    Marking m = net.initial_marking();
    auto enabled = enabled_transitions(net, m);
    ASSERT_EQ(enabled.size(), 1u);
    EXPECT_TRUE(net.transition(enabled.front()).silent());
    m = fire(net, m, enabled.front());
    std::set<std::string> labels;
    for (const auto& id : enabled_transitions(net, m))
        if (auto l = net.transition(id).label)
            labels.insert(*l);
    EXPECT_EQ(labels, (std::set<std::string>{"T#1", "T#2"}));
}

TEST(Compile, OrGatewayRejected) {
    Plan p = crisisflow::testing::and_diamond_plan();
    p.gateways = {{"split", GatewayKind::OrSplit}, {"join", GatewayKind::OrJoin}};
    try {
        plan_to_net(p);
        FAIL();
    } catch (const PlanError& e) {
        EXPECT_EQ(e.kind(), PlanError::Kind::Compile);
    }
}

TEST(Compile, InvalidPlanRejected) {
    Plan p = crisisflow::testing::single_task_plan();
    p.tasks.push_back({"U", "U", "R"});
    EXPECT_THROW(plan_to_net(p), PlanError);
}

TEST(Compile, MessageFlowOrdersTasks) {
    Plan p = crisisflow::testing::single_task_plan("a");
    p.tasks.push_back({"b", "B", "R"});
    p.message_flows.push_back({"a", "b"});
    ASSERT_TRUE(validate_plan(p).empty());
    EXPECT_EQ(effective_flows(p), std::vector<Flow>{(Flow{"a", "b"})});
    EXPECT_EQ(complete_sequences(plan_to_net(p)), (std::set<std::vector<std::string>>{{"a", "b"}}));
}

// Compiled random plans: workflow-net structure, visible count equal to the
// summed multiplicity, safeness and soundness.
TEST(CompileProperty, StructureCountsSafety) {
    Rng rng(31337);
    for (int k = 0; k < 150; ++k) {
        Plan p = crisisflow::testing::random_plan(rng, 6);
        WorkflowNet net = plan_to_net(p);
        ASSERT_TRUE(net.structural_violations().empty());
        std::size_t expected = 0;
        for (const auto& t : p.tasks)
            expected += static_cast<std::size_t>(t.multiplicity);
        ASSERT_EQ(net.visible_count(), expected);
        auto g = reachability_graph(net, net.initial_marking(), 50000);
        ASSERT_FALSE(g.truncated);
        for (const auto& m : g.nodes)
            for (const auto& [place, n] : m.counts())
                ASSERT_LE(n, 1u) << place << " in " << m.to_string() << "\n" << serialize_plan(p);
        ASSERT_TRUE(check_soundness(net, 50000).sound) << serialize_plan(p);
    }
}
