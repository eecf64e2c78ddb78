#include "crisisflow/error.hpp"

namespace crisisflow {

namespace {

const char* plan_code(PlanError::Kind kind) {
    switch (kind) {
    case PlanError::Kind::Syntax: return "syntax_error";
    case PlanError::Kind::Reference: return "reference_error";
    case PlanError::Kind::Structure: return "structure_error";
    case PlanError::Kind::Compile: return "compile_error";
    }
    return "plan_error";
}

const char* net_code(NetError::Kind kind) {
    switch (kind) {
    case NetError::Kind::NotEnabled: return "not_enabled";
    case NetError::Kind::UnknownTransition: return "unknown_transition";
    case NetError::Kind::StateSpaceExceeded: return "state_space_exceeded";
    case NetError::Kind::Syntax: return "syntax_error";
    }
    return "net_error";
}

const char* engine_code(EngineError::Kind kind) {
    switch (kind) {
    case EngineError::Kind::Validation: return "validation_error";
    case EngineError::Kind::UnknownPlan: return "unknown_plan";
    case EngineError::Kind::UnknownCase: return "unknown_case";
    case EngineError::Kind::UnknownRole: return "unknown_role";
    case EngineError::Kind::UnknownItem: return "unknown_item";
    case EngineError::Kind::IllegalTransition: return "illegal_transition";
    case EngineError::Kind::RoleMismatch: return "role_mismatch";
    case EngineError::Kind::StaleItem: return "stale_item";
    case EngineError::Kind::NonCompletion: return "non_completion";
    }
    return "engine_error";
}

const char* log_code(LogError::Kind kind) {
    switch (kind) {
    case LogError::Kind::MalformedRow: return "malformed_row";
    case LogError::Kind::XmlParse: return "xml_parse_error";
    case LogError::Kind::MissingConceptName: return "missing_concept_name";
    case LogError::Kind::MissingTimestamp: return "missing_timestamp";
    case LogError::Kind::UnmappedActivity: return "unmapped_activity";
    }
    return "log_error";
}

const char* mining_code(MiningError::Kind kind) {
    switch (kind) {
    case MiningError::Kind::EmptyLog: return "empty_log";
    case MiningError::Kind::MissingResource: return "missing_resource";
    }
    return "mining_error";
}

} // namespace

PlanError::PlanError(Kind kind, const std::string& message)
    : Error(plan_code(kind), message), kind_(kind) {}

NetError::NetError(Kind kind, const std::string& message)
    : Error(net_code(kind), message), kind_(kind) {}

EngineError::EngineError(Kind kind, const std::string& message)
    : Error(engine_code(kind), message), kind_(kind) {}

LogError::LogError(Kind kind, const std::string& message)
    : Error(log_code(kind), message), kind_(kind) {}

MiningError::MiningError(Kind kind, const std::string& message)
    : Error(mining_code(kind), message), kind_(kind) {}

} // namespace crisisflow
