#include "crisisflow/engine.hpp"
#include "crisisflow/error.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace crisisflow {

namespace {

class DecisionStream {
public:
    explicit DecisionStream(std::uint64_t seed) : rng_(seed) {}

    /// Uniform index in [0, n).
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

private:
    std::mt19937_64 rng_;
};

} // namespace

EventLog auto_simulate(const Plan& plan, std::size_t n_cases, const SimulationPolicy& policy) {
    auto violations = validate_plan(plan);
    if (!violations.empty())
        throw EngineError(EngineError::Kind::Validation,
                          "plan '" + plan.id + "' is invalid: " + violations.front().message);
    WorkflowNet net;
    try {
        net = plan_to_net(plan);
    } catch (const PlanError& e) {
        throw EngineError(EngineError::Kind::Validation, e.what());
    }

    std::map<std::string, std::string> performer; // visible transition id -> actor
    for (const auto& t : net.transitions()) {
        if (t.silent())
            continue;
        const TaskDef* task = plan.find_task(t.label->substr(0, t.label->find('#')));
        const RoleDef* role = plan.find_role(task->role);
        performer[t.id] = *std::min_element(role->actors.begin(), role->actors.end());
    }

    DecisionStream stream(policy.seed);
    EventLog log;
    log.attributes["concept:name"] = plan.id;
    const Marking goal = net.final_marking();

    for (std::size_t c = 1; c <= n_cases; ++c) {
        Trace trace{std::to_string(c), {}};
        Marking m = net.initial_marking();
        Timestamp clock = clock_epoch();
        std::size_t steps = 0;

        while (true) {
            std::vector<const Transition*> enabled;
            for (const auto& t : net.transitions())
                if (is_enabled(t, m))
                    enabled.push_back(&t);
            if (enabled.empty())
                break;
            if (++steps > policy.max_steps)
                throw EngineError(EngineError::Kind::NonCompletion,
                                  "case " + trace.case_id + " did not complete within " +
                                      std::to_string(policy.max_steps) + " steps");

            // Choices: one draw per contested place.
            std::map<std::string, const Transition*> winner;
            for (const auto& [place, tokens] : m.counts()) {
                std::vector<const Transition*> consumers;
                for (const Transition* t : enabled)
                    if (std::binary_search(t->inputs.begin(), t->inputs.end(), place))
                        consumers.push_back(t);
                if (consumers.size() >= 2)
                    winner[place] = consumers[stream.pick(consumers.size())];
            }
            std::vector<const Transition*> candidates;
            for (const Transition* t : enabled) {
                bool won_all = std::all_of(t->inputs.begin(), t->inputs.end(), [&](const std::string& p) {
                    auto it = winner.find(p);
                    return it == winner.end() || it->second == t;
                });
                if (won_all)
                    candidates.push_back(t);
            }
            if (candidates.empty())
                candidates = enabled;

            // Interleaving.
            const Transition* chosen = candidates[stream.pick(candidates.size())];
            m = fire(net, m, chosen->id);
            if (!chosen->silent()) {
                trace.events.push_back(Event{trace.case_id, *chosen->label, performer.at(chosen->id), "complete", clock});
                clock += policy.think_time;
            }
        }
        if (m != goal)
            throw EngineError(EngineError::Kind::NonCompletion,
                              "case " + trace.case_id + " deadlocked in marking " + m.to_string());
        log.traces.push_back(std::move(trace));
    }
    return log;
}

} // namespace crisisflow
