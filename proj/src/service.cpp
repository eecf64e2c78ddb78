#include "crisisflow/service.hpp"

#include "crisisflow/corpus.hpp"
#include "crisisflow/error.hpp"
#include "crisisflow/mining.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace crisisflow {

using nlohmann::json;

namespace {

json marking_json(const Marking& m) {
    json out = json::object();
    for (const auto& [place, n] : m.counts())
        out[place] = n;
    return out;
}

json case_json(const Case& c) {
    return {{"id", c.id},
            {"plan", c.plan_id},
            {"status", std::string(to_string(c.status))},
            {"marking", marking_json(c.marking)},
            {"clock", format_timestamp(c.clock)}};
}

json item_json(const WorkItem& item) {
    return {{"id", item.id},
            {"caseId", item.case_id},
            {"taskId", item.task_id},
            {"role", item.role},
            {"state", std::string(to_string(item.state))},
            {"actor", item.actor ? json(*item.actor) : json(nullptr)}};
}

json snapshot_json(const CaseSnapshot& snap) {
    json out = case_json(snap.state);
    json tasks = json::object();
    for (const auto& [task, status] : snap.tasks)
        tasks[task] = std::string(to_string(status));
    out["tasks"] = std::move(tasks);
    out["eventCount"] = snap.event_count;
    return out;
}

int status_for(const Error& e) {
    if (auto* engine = dynamic_cast<const EngineError*>(&e)) {
        switch (engine->kind()) {
        case EngineError::Kind::UnknownPlan:
        case EngineError::Kind::UnknownCase:
        case EngineError::Kind::UnknownRole:
        case EngineError::Kind::UnknownItem: return 404;
        case EngineError::Kind::IllegalTransition:
        case EngineError::Kind::StaleItem: return 409;
        default: return 400;
        }
    }
    return 400;
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
    send_json(res, status, {{"error", code}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
    try {
        json body = json::parse(req.body.empty() ? std::string("{}") : req.body);
        if (!body.is_object())
            throw Error("malformed", "request body must be a JSON object");
        return body;
    } catch (const json::parse_error& e) {
        throw Error("malformed", std::string("request body is not JSON: ") + e.what());
    }
}

std::string body_string(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string())
        throw Error("malformed", std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

std::vector<std::string> validate_config(const ServiceConfig& config) {
    std::vector<std::string> problems;
    if (config.port < 1 || config.port > 65535)
        problems.push_back("port " + std::to_string(config.port) + " is outside [1, 65535]");
    if (config.host.empty())
        problems.push_back("bind address is empty");
    if (!config.plan_dir.empty() && !std::filesystem::is_directory(config.plan_dir))
        problems.push_back("plan directory '" + config.plan_dir + "' does not exist");
    if (config.state_cap == 0)
        problems.push_back("state-space cap must be positive");
    return problems;
}

struct Service::Impl {
    ServiceConfig config;
    Engine engine;
    httplib::Server server;
    std::thread thread;
    int port = 0;
    bool bound = false;

    explicit Impl(ServiceConfig c) : config(std::move(c)), engine(config.state_cap) {}

    void load_plans() {
        engine.register_plan(corpus::builtin_plan());
        if (config.plan_dir.empty())
            return;
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(config.plan_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            try {
                engine.register_plan(parse_plan(read_file(file)));
            } catch (const PlanError& e) {
                throw PlanError(e.kind(), file.string() + ": " + e.what());
            }
        }
    }

    std::vector<std::string> requested_cases(const json& body) const {
        auto it = body.find("cases");
        if (it == body.end() || it->is_null())
            return engine.case_ids();
        if (!it->is_array())
            throw Error("malformed", "field 'cases' must be an array of case ids");
        std::vector<std::string> ids;
        for (const auto& id : *it) {
            if (!id.is_string())
                throw Error("malformed", "field 'cases' must be an array of case ids");
            ids.push_back(id.get<std::string>());
        }
        if (ids.empty())
            return engine.case_ids();
        return ids;
    }

    void export_if_completed(const std::string& case_id) {
        if (config.log_dir.empty())
            return;
        if (engine.case_state(case_id).state.status != CaseStatus::Completed)
            return;
        std::filesystem::create_directories(config.log_dir);
        write_log_file(engine.case_log({case_id}), (std::filesystem::path(config.log_dir) / (case_id + ".csv")).string());
    }

    template <typename Handler>
    auto guarded(Handler handler) {
        return [handler](const httplib::Request& req, httplib::Response& res) {
            try {
                handler(req, res);
            } catch (const Error& e) {
                send_error(res, e.code() == "malformed" ? 400 : status_for(e), e.code(), e.what());
            } catch (const std::exception& e) {
                send_error(res, 500, "internal", e.what());
            }
        };
    }

    void routes() {
        server.Get("/api/health", guarded([](const auto&, auto& res) { send_json(res, 200, {{"status", "ok"}}); }));

        server.Get("/api/plans", guarded([this](const auto&, auto& res) {
            json list = json::array();
            for (const auto& id : engine.plan_ids()) {
                auto plan = engine.find_plan(id);
                list.push_back({{"id", id}, {"roles", plan->roles.size()}, {"tasks", plan->tasks.size()}});
            }
            send_json(res, 200, list);
        }));

        server.Get(R"(/api/plans/([^/]+))", guarded([this](const httplib::Request& req, auto& res) {
            auto plan = engine.find_plan(req.matches[1].str());
            if (!plan)
                throw EngineError(EngineError::Kind::UnknownPlan, "unknown plan '" + req.matches[1].str() + "'");
            send_json(res, 200, json::parse(serialize_plan(*plan)));
        }));

        server.Post("/api/cases", guarded([this](const httplib::Request& req, auto& res) {
            json body = parse_body(req);
            Case c = engine.create_case(std::string_view(body_string(body, "plan")));
            send_json(res, 201, case_json(c));
        }));

        server.Get("/api/cases", guarded([this](const auto&, auto& res) {
            json list = json::array();
            for (const auto& id : engine.case_ids())
                list.push_back(case_json(engine.case_state(id).state));
            send_json(res, 200, list);
        }));

        server.Get(R"(/api/cases/([^/]+))", guarded([this](const httplib::Request& req, auto& res) {
            send_json(res, 200, snapshot_json(engine.case_state(req.matches[1].str())));
        }));

        server.Get(R"(/api/cases/([^/]+)/log)", guarded([this](const httplib::Request& req, auto& res) {
            std::string format = req.has_param("format") ? req.get_param_value("format") : "csv";
            EventLog log = engine.case_log({req.matches[1].str()});
            if (format == "csv") {
                res.set_content(write_csv(log), "text/csv");
            } else if (format == "xes") {
                res.set_content(write_xes(log), "application/xml");
            } else {
                throw Error("malformed", "format must be csv or xes");
            }
        }));

        server.Get(R"(/api/roles/([^/]+)/worklist)", guarded([this](const httplib::Request& req, auto& res) {
            json list = json::array();
            for (const auto& item : engine.worklist(req.matches[1].str()))
                list.push_back(item_json(item));
            send_json(res, 200, list);
        }));

        server.Post(R"(/api/workitems/([^/]+)/act)", guarded([this](const httplib::Request& req, auto& res) {
            json body = parse_body(req);
            std::string action_text = body_string(body, "action");
            auto action = work_action_from_string(action_text);
            if (!action)
                throw Error("malformed", "unknown action '" + action_text + "'");
            WorkItem item = engine.act(req.matches[1].str(), *action, body_string(body, "actor"));
            export_if_completed(item.case_id);
            send_json(res, 200, item_json(item));
        }));

        server.Post("/api/mine/alpha", guarded([this](const httplib::Request& req, auto& res) {
            json body = parse_body(req);
            auto traces = project_completions(engine.case_log(requested_cases(body)));
            WorkflowNet net = alpha_discover(traces);
            FitnessReport fit = token_replay(net, traces);
            send_json(res, 200,
                      {{"net", json::parse(write_net_json(net))},
                       {"transitions", net.transitions().size()},
                       {"places", net.places().size()},
                       {"fitness", fit.fitness()}});
        }));

        server.Post("/api/mine/handover", guarded([this](const httplib::Request& req, auto& res) {
            json body = parse_body(req);
            bool self_loops = body.value("includeSelfLoops", false);
            Sociogram g = handover_network(engine.case_log(requested_cases(body)));
            json edges = json::array();
            for (const auto& [pair, w] : g.edges) {
                if (pair.first == pair.second && !self_loops)
                    continue;
                edges.push_back({{"from", pair.first}, {"to", pair.second}, {"weight", w}});
            }
            json degrees = json::object();
            for (const auto& [actor, d] : degree_stats(g, self_loops))
                degrees[actor] = {{"in", d.in}, {"out", d.out}, {"total", d.total}};
            send_json(res, 200, {{"nodes", g.nodes}, {"edges", edges}, {"degrees", degrees}, {"dot", g.to_dot()}});
        }));

        if (!config.ui_dir.empty())
            server.set_mount_point("/ui", config.ui_dir);
    }
};

Service::Service(ServiceConfig config) {
    auto problems = validate_config(config);
    if (!problems.empty())
        throw Error("config_error", problems.front());
    impl_ = std::make_unique<Impl>(std::move(config));
    impl_->load_plans();
    impl_->routes();
}

Service::~Service() { stop(); }

Engine& Service::engine() noexcept { return impl_->engine; }

void Service::bind() {
    if (!impl_->server.bind_to_port(impl_->config.host, impl_->config.port))
        throw Error("bind_failure",
                    "cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
    impl_->port = impl_->config.port;
    impl_->bound = true;
}

void Service::bind_any_port() {
    int port = impl_->server.bind_to_any_port(impl_->config.host);
    if (port < 0)
        throw Error("bind_failure", "cannot bind " + impl_->config.host);
    impl_->port = port;
    impl_->bound = true;
}

int Service::port() const noexcept { return impl_->port; }

void Service::listen() {
    if (!impl_->bound)
        bind();
    impl_->server.listen_after_bind();
}

void Service::start() {
    if (!impl_->bound)
        bind();
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void Service::stop() {
    if (!impl_)
        return;
    impl_->server.stop();
    if (impl_->thread.joinable())
        impl_->thread.join();
}

} // namespace crisisflow
