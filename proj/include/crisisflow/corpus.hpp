#pragma once

#include "crisisflow/event_log.hpp"
#include "crisisflow/plan.hpp"

#include <map>
#include <string>
#include <vector>

namespace crisisflow::corpus {

inline constexpr const char* kPlanId = "hcmc-tsunami";

/// Response-phase plan for a Ho Chi Minh City tsunami: seven roles (A1-A7),
/// tasks T1-T20 plus the police duplicates T8', T9', T18', T19'.
///
/// Control flow: T1 -> T2 ~> T3, then T4 in parallel with T5; after T5 the
/// functional units work in parallel (T6, T7, T10, T11, T12 -> optional T13,
/// and the evacuate / transfer pairs). Every duplicated military/police pair
/// sits in a three-way choice: military only, police only, or both. All
/// branches join before T14 -> T15 ~> T16 -> T17, which opens the
/// identify-damages and search-fishermen pairs; these join before T20.
/// `~>` marks message flows that also order the two tasks.
const Plan& builtin_plan();

/// Task id -> role id, as assigned in the plan.
std::map<std::string, std::string> role_map();

/// The two recorded response cases ("1" and "2"), lifecycle "complete",
/// synthetic timestamps from the engine clock rule, resources set to roles.
const EventLog& fixture_log();

std::vector<ActivitySequence> fixture_traces();

} // namespace crisisflow::corpus
