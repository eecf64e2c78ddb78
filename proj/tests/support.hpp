#pragma once

#include "crisisflow/event_log.hpp"
#include "crisisflow/net.hpp"
#include "crisisflow/plan.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace crisisflow::testing {

/// Test-local PRNG so generators stay reproducible across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [0, n).
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    bool chance(unsigned percent) { return below(100) < percent; }

private:
    std::mt19937_64 engine_;
};

/// Block-structured plan over AND/XOR gateways with optional and
/// multi-instance tasks. Always validates.
Plan random_plan(Rng& rng, std::size_t max_tasks = 8);

/// Arbitrary small net with source "i" and sink "o" and up to `max_places`
/// places. Not necessarily a workflow net, sound or bounded.
WorkflowNet random_net(Rng& rng, std::size_t max_places = 10);

/// Random log over a small alphabet; traces may repeat activities.
std::vector<ActivitySequence> random_traces(Rng& rng, std::size_t alphabet = 6);

/// Random log with resources from a small actor pool.
EventLog random_resource_log(Rng& rng);

/// Plans used across suites.
Plan single_task_plan(const std::string& task = "T");
Plan and_diamond_plan();
Plan xor_diamond_plan();

/// net i -> [a] -> p1 -> [b] -> p2 -> [c] -> o style chain, one place between
/// consecutive labels.
WorkflowNet chain_net(const std::vector<std::string>& labels);

} // namespace crisisflow::testing
