#pragma once

#include <stdexcept>
#include <string>

namespace crisisflow {

/// Base class for every error raised by the toolkit. `code()` is a stable,
/// machine-readable identifier (it ends up in HTTP error bodies and CLI output).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class PlanError : public Error {
public:
    enum class Kind { Syntax, Reference, Structure, Compile };

    PlanError(Kind kind, const std::string& message);

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class NetError : public Error {
public:
    enum class Kind { NotEnabled, UnknownTransition, StateSpaceExceeded, Syntax };

    NetError(Kind kind, const std::string& message);

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class EngineError : public Error {
public:
    enum class Kind {
        Validation,
        UnknownPlan,
        UnknownCase,
        UnknownRole,
        UnknownItem,
        IllegalTransition,
        RoleMismatch,
        StaleItem,
        NonCompletion,
    };

    EngineError(Kind kind, const std::string& message);

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class LogError : public Error {
public:
    enum class Kind { MalformedRow, XmlParse, MissingConceptName, MissingTimestamp, UnmappedActivity };

    LogError(Kind kind, const std::string& message);

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class MiningError : public Error {
public:
    enum class Kind { EmptyLog, MissingResource };

    MiningError(Kind kind, const std::string& message);

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

} // namespace crisisflow
