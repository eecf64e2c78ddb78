#include "crisisflow/error.hpp"
#include "crisisflow/net.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace crisisflow;
using crisisflow::testing::Rng;

namespace {

WorkflowNet single_transition() { return crisisflow::testing::chain_net({"t"}); }

WorkflowNet and_join_net() {
    WorkflowNet net;
    for (const char* p : {"i", "p1", "p2", "o"})
        net.add_place(p);
    net.add_transition("split", std::nullopt);
    net.add_transition("join", std::nullopt);
    net.add_arc("i", "split");
    net.add_arc("split", "p1");
    net.add_arc("split", "p2");
    net.add_arc("p1", "join");
    net.add_arc("p2", "join");
    net.add_arc("join", "o");
    return net;
}

} // namespace

TEST(Marking, ZeroEntriesAreDropped) {
    Marking m{{"p", 0}, {"q", 2}};
    EXPECT_EQ(m.counts().size(), 1u);
    EXPECT_EQ(m["p"], 0u);
    EXPECT_EQ(m.remove("q", 5), 2u);
    EXPECT_TRUE(m.empty());
    EXPECT_EQ(m, Marking{});
}

TEST(Marking, Rendering) {
    Marking m{{"p", 2}, {"i", 1}};
    EXPECT_EQ(m.to_string(), "{i:1, p:2}");
    EXPECT_EQ(m.total(), 3u);
    EXPECT_EQ(Marking{}.to_string(), "{}");
}

TEST(Enabled, SingleTransition) {
    auto net = single_transition();
    EXPECT_EQ(enabled_transitions(net, {{"i", 1}}), std::vector<std::string>{"t"});
    EXPECT_TRUE(enabled_transitions(net, {{"o", 1}}).empty());
}

TEST(Enabled, AndJoinNeedsEveryInput) {
    auto net = and_join_net();
    const auto& join = net.transition("join");
    EXPECT_FALSE(is_enabled(join, {{"p1", 1}}));
    EXPECT_TRUE(is_enabled(join, {{"p1", 1}, {"p2", 1}}));
}

TEST(Fire, Basic) {
    auto net = single_transition();
    EXPECT_EQ(fire(net, {{"i", 1}}, "t"), (Marking{{"o", 1}}));
    try {
        fire(net, {{"o", 1}}, "t");
        FAIL() << "expected not-enabled";
    } catch (const NetError& e) {
        EXPECT_EQ(e.kind(), NetError::Kind::NotEnabled);
    }
    EXPECT_THROW(fire(net, {{"i", 1}}, "nope"), NetError);
}

TEST(Fire, AndSplitProducesBothBranches) {
    auto net = and_join_net();
    EXPECT_EQ(fire(net, {{"i", 1}}, "split"), (Marking{{"p1", 1}, {"p2", 1}}));
}

TEST(Net, ArcsNeedExistingEnds) {
    WorkflowNet net;
    net.add_place("i");
    EXPECT_ANY_THROW(net.add_arc("i", "ghost"));
    net.add_transition("t", "t");
    EXPECT_ANY_THROW(net.add_arc("i", "i"));
    EXPECT_ANY_THROW(net.add_transition("t", std::nullopt));
}

TEST(Net, StructuralViolations) {
    EXPECT_TRUE(single_transition().structural_violations().empty());
    auto net = single_transition();
    net.add_place("orphan");
    EXPECT_FALSE(net.structural_violations().empty());

    auto back = single_transition();
    back.add_transition("back", std::nullopt);
    back.add_arc("o", "back");
    back.add_arc("back", "i");
    EXPECT_GE(back.structural_violations().size(), 2u);
}

TEST(Net, RemoveArc) {
    auto net = single_transition();
    EXPECT_TRUE(net.remove_arc("i", "t"));
    EXPECT_FALSE(net.remove_arc("i", "t"));
    EXPECT_TRUE(net.transition("t").inputs.empty());
}

TEST(NetJson, RoundTrip) {
    auto net = and_join_net();
    net.add_transition("a", "A");
    net.add_arc("p1", "a");
    auto back = read_net_json(write_net_json(net));
    EXPECT_EQ(back, net);
    EXPECT_THROW(read_net_json("{"), NetError);
    EXPECT_THROW(read_net_json(R"({"places":["i"],"transitions":[],"arcs":[{"from":"i","to":"x"}]})"), Error);
}

// fire followed by the reverse update (add preset, remove postset) gives the
// starting marking back, for every enabled transition of random nets.
TEST(NetProperty, TokenConservation) {
    Rng rng(20240101);
    std::size_t checked = 0;
    for (int instance = 0; instance < 300; ++instance) {
        auto net = crisisflow::testing::random_net(rng);
        Marking m;
        for (const auto& p : net.places())
            if (rng.chance(50))
                m.add(p, 1 + static_cast<std::uint32_t>(rng.below(3)));
        for (int step = 0; step < 5; ++step) {
            auto enabled = enabled_transitions(net, m);
            if (enabled.empty())
                break;
            const auto& t = net.transition(enabled[rng.below(enabled.size())]);
            Marking next = fire(net, m, t.id);
            Marking undone = next;
            for (const auto& p : t.inputs)
                undone.add(p);
            for (const auto& p : t.outputs)
                ASSERT_EQ(undone.remove(p), 1u);
            ASSERT_EQ(undone, m) << "transition " << t.id;
            ASSERT_EQ(next.total() + t.inputs.size(), m.total() + t.outputs.size());
            m = next;
            ++checked;
        }
    }
    EXPECT_GE(checked, 100u);
}
