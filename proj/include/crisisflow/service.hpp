#pragma once

#include "crisisflow/engine.hpp"
#include "crisisflow/reachability.hpp"

#include <memory>
#include <string>
#include <thread>
#include <vector>

namespace crisisflow {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Every *.json file here is loaded as a plan at startup (optional).
    std::string plan_dir;
    /// Completed cases are written here as <case>.csv (optional).
    std::string log_dir;
    /// Static worklist client served under /ui (optional).
    std::string ui_dir;
    std::size_t state_cap = kDefaultStateCap;
};

/// Problems with the configuration itself; empty when usable.
std::vector<std::string> validate_config(const ServiceConfig& config);

/// JSON/HTTP front end over one Engine. The built-in tsunami plan is always
/// loaded. Routes:
///   GET  /api/health
///   GET  /api/plans                      GET /api/plans/{id}
///   POST /api/cases {plan}               GET /api/cases       GET /api/cases/{id}
///   GET  /api/roles/{role}/worklist
///   POST /api/workitems/{id}/act {action, actor}
///   GET  /api/cases/{id}/log?format=csv|xes
///   POST /api/mine/alpha {cases}         POST /api/mine/handover {cases, includeSelfLoops}
/// Errors are {"error": code, "message": text} with 400, 404 or 409.
class Service {
public:
    /// Throws Error("config_error") for a bad config and PlanError for
    /// malformed plan files.
    explicit Service(ServiceConfig config);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    Engine& engine() noexcept;

    /// Binds the configured address; throws Error("bind_failure").
    void bind();
    /// Binds an ephemeral port on the configured host instead.
    void bind_any_port();
    int port() const noexcept;

    /// Serves on the calling thread until stop().
    void listen();
    /// Serves on a background thread.
    void start();
    /// Stops accepting, lets in-flight requests finish, joins the thread.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace crisisflow
