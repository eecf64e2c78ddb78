#include "crisisflow/corpus.hpp"

namespace crisisflow::corpus {

namespace {

struct PlanBuilder {
    Plan plan;

    void role(const char* id, const char* name, const char* actor) { plan.roles.push_back({id, name, {actor}}); }
    void task(const char* id, const char* label, const char* role, bool optional = false) {
        plan.tasks.push_back({id, label, role, 1, optional});
    }
    void gateway(const std::string& id, GatewayKind kind) { plan.gateways.push_back({id, kind}); }
    void flow(const std::string& from, const std::string& to) { plan.flows.push_back({from, to}); }
    void message(const std::string& from, const std::string& to) { plan.message_flows.push_back({from, to}); }

    // Three-way choice over a military task and its police duplicate.
    // Returns {entry gateway, exit gateway}.
    std::pair<std::string, std::string> military_police_choice(const std::string& name, const std::string& military,
                                                               const std::string& police) {
        const std::string choice = name + "-choice";
        const std::string mil_only = name + "-military-only";
        const std::string pol_only = name + "-police-only";
        const std::string both = name + "-both";
        const std::string run_mil = name + "-military-run";
        const std::string run_pol = name + "-police-run";
        const std::string done_mil = name + "-military-done";
        const std::string done_pol = name + "-police-done";
        const std::string join = name + "-join";

        gateway(choice, GatewayKind::XorSplit);
        gateway(mil_only, GatewayKind::AndSplit);
        gateway(pol_only, GatewayKind::AndSplit);
        gateway(both, GatewayKind::AndSplit);
        gateway(run_mil, GatewayKind::XorJoin);
        gateway(run_pol, GatewayKind::XorJoin);
        gateway(done_mil, GatewayKind::XorJoin);
        gateway(done_pol, GatewayKind::XorJoin);
        gateway(join, GatewayKind::AndJoin);

        flow(choice, mil_only);
        flow(choice, pol_only);
        flow(choice, both);
        flow(mil_only, run_mil);
        flow(mil_only, done_pol); // police task bypassed
        flow(pol_only, done_mil); // military task bypassed
        flow(pol_only, run_pol);
        flow(both, run_mil);
        flow(both, run_pol);
        flow(run_mil, military);
        flow(military, done_mil);
        flow(run_pol, police);
        flow(police, done_pol);
        flow(done_mil, join);
        flow(done_pol, join);
        return {choice, join};
    }
};

Plan make_plan() {
    PlanBuilder b;
    b.plan.id = kPlanId;

    b.role("A1", "Institute of Geophysics", "igp-duty-officer");
    b.role("A2", "Local administration", "admin-duty-officer");
    b.role("A3", "Military", "military-duty-officer");
    b.role("A4", "Police", "police-duty-officer");
    b.role("A5", "Local civil defense forces", "civil-defense-duty-officer");
    b.role("A6", "Communication unit", "communication-duty-officer");
    b.role("A7", "Health and Red Cross organizations", "health-duty-officer");

    b.task("T1", "Detect tsunami risk", "A1");
    b.task("T2", "Inform tsunami start", "A1");
    b.task("T3", "Receive tsunami start", "A2");
    b.task("T4", "Fire the flares", "A2");
    b.task("T5", "Notify functional units to start", "A2");
    b.task("T6", "Inform by portable speakers", "A5");
    b.task("T7", "Broadcast over the media", "A6");
    b.task("T8", "Evacuate people", "A3");
    b.task("T8'", "Evacuate people", "A4");
    b.task("T9", "Transfer injuries to safe places", "A3");
    b.task("T9'", "Transfer injuries to safe places", "A4");
    b.task("T10", "Inform, guide the fisherman", "A3");
    b.task("T11", "Protect the property", "A4");
    b.task("T12", "Perform the first aid", "A7");
    b.task("T13", "Call ambulance", "A7", /*optional=*/true);
    b.task("T14", "Detect tsunami end", "A1");
    b.task("T15", "Inform tsunami end", "A1");
    b.task("T16", "Receive tsunami end", "A2");
    b.task("T17", "Notify functional units to end", "A2");
    b.task("T18", "Identify damages", "A3");
    b.task("T18'", "Identify damages", "A4");
    b.task("T19", "Search distress fishermen", "A3");
    b.task("T19'", "Search distress fishermen", "A4");
    b.task("T20", "Close crisis response", "A2");

    // Warning phase.
    b.flow("T1", "T2");
    b.message("T2", "T3");
    b.gateway("warn-split", GatewayKind::AndSplit);
    b.flow("T3", "warn-split");
    b.flow("warn-split", "T4");
    b.flow("warn-split", "T5");

    // Functional units respond in parallel.
    b.gateway("units-split", GatewayKind::AndSplit);
    b.gateway("response-join", GatewayKind::AndJoin);
    b.flow("T5", "units-split");
    b.flow("T4", "response-join");
    for (const char* unit_task : {"T6", "T7", "T10", "T11"}) {
        b.flow("units-split", unit_task);
        b.flow(unit_task, "response-join");
    }
    auto [evac_in, evac_out] = b.military_police_choice("evacuate", "T8", "T8'");
    b.flow("units-split", evac_in);
    b.flow(evac_out, "response-join");
    auto [transfer_in, transfer_out] = b.military_police_choice("transfer", "T9", "T9'");
    b.flow("units-split", transfer_in);
    b.flow(transfer_out, "response-join");
    b.flow("units-split", "T12");
    b.flow("T12", "T13");
    b.flow("T13", "response-join");

    // End of the tsunami.
    b.flow("response-join", "T14");
    b.flow("T14", "T15");
    b.message("T15", "T16");
    b.flow("T16", "T17");
    b.gateway("aftermath-split", GatewayKind::AndSplit);
    b.gateway("aftermath-join", GatewayKind::AndJoin);
    b.flow("T17", "aftermath-split");
    auto [damage_in, damage_out] = b.military_police_choice("damages", "T18", "T18'");
    auto [search_in, search_out] = b.military_police_choice("search", "T19", "T19'");
    b.flow("aftermath-split", damage_in);
    b.flow("aftermath-split", search_in);
    b.flow(damage_out, "aftermath-join");
    b.flow(search_out, "aftermath-join");
    b.flow("aftermath-join", "T20");
    return std::move(b.plan);
}

const std::vector<ActivitySequence>& recorded_cases() {
    static const std::vector<ActivitySequence> cases = {
        {"T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10", "T8'", "T11",
         "T9'", "T12", "T13", "T14", "T15", "T16", "T17", "T18", "T18'", "T19", "T19'", "T20"},
        {"T1", "T2", "T3", "T5", "T4", "T7", "T8", "T6", "T10", "T9", "T11", "T12",
         "T14", "T15", "T16", "T17", "T19", "T18'", "T20"},
    };
    return cases;
}

EventLog make_fixture() {
    const auto roles = role_map();
    EventLog log;
    log.attributes["concept:name"] = "hcmc-tsunami-response";
    const auto& cases = recorded_cases();
    for (std::size_t c = 0; c < cases.size(); ++c) {
        Trace trace{std::to_string(c + 1), {}};
        Timestamp clock = clock_epoch();
        for (const auto& activity : cases[c]) {
            trace.events.push_back(Event{trace.case_id, activity, roles.at(activity), "complete", clock});
            clock += kClockStep;
        }
        log.traces.push_back(std::move(trace));
    }
    return log;
}

} // namespace

const Plan& builtin_plan() {
    static const Plan plan = make_plan();
    return plan;
}

std::map<std::string, std::string> role_map() {
    std::map<std::string, std::string> map;
    for (const auto& t : builtin_plan().tasks)
        map[t.id] = t.role;
    return map;
}

const EventLog& fixture_log() {
    static const EventLog log = make_fixture();
    return log;
}

std::vector<ActivitySequence> fixture_traces() { return recorded_cases(); }

} // namespace crisisflow::corpus
