#include "cli.hpp"

#include "crisisflow/corpus.hpp"
#include "crisisflow/engine.hpp"
#include "crisisflow/error.hpp"
#include "crisisflow/mining.hpp"
#include "crisisflow/plan.hpp"
#include "crisisflow/reachability.hpp"
#include "crisisflow/service.hpp"

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace crisisflow::cli {

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("io_error", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("io_error", "cannot write '" + path + "'");
    out << text;
}

/// A net file may hold a net or a plan; plans are compiled.
WorkflowNet load_net(const std::string& path) {
    std::string text = read_text(path);
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_object() && doc.contains("tasks"))
        return plan_to_net(parse_plan(text));
    return read_net_json(text);
}

const char* boolean(bool b) { return b ? "true" : "false"; }

Service* g_running_service = nullptr;

extern "C" void handle_stop_signal(int) {
    if (g_running_service)
        g_running_service->stop();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Crisis-plan workflow toolkit: validate, simulate, check and mine response plans", "crisisflow"};
    app.require_subcommand(1);

    // plan validate / plan soundness
    auto* plan_cmd = app.add_subcommand("plan", "Plan checks")->require_subcommand(1);
    std::string plan_file;
    auto* validate_cmd = plan_cmd->add_subcommand("validate", "Check plan invariants");
    validate_cmd->add_option("file", plan_file, "Plan JSON")->required();
    auto* soundness_cmd = plan_cmd->add_subcommand("soundness", "Compile and check soundness");
    soundness_cmd->add_option("file", plan_file, "Plan JSON")->required();
    std::size_t cap = kDefaultStateCap;
    soundness_cmd->add_option("--cap", cap, "State-space cap")->check(CLI::PositiveNumber);

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Seeded auto-simulation");
    std::string sim_plan, sim_out;
    std::size_t n_cases = 1;
    std::uint64_t seed = 0;
    simulate_cmd->add_option("file", sim_plan, "Plan JSON")->required();
    simulate_cmd->add_option("--cases", n_cases, "Number of cases")->required();
    simulate_cmd->add_option("--seed", seed, "Random seed")->required();
    simulate_cmd->add_option("--out", sim_out, "Output log (.csv or .xes); stdout (CSV) if omitted");

    // mine alpha / footprint / handover
    auto* mine_cmd = app.add_subcommand("mine", "Process and social-network mining")->require_subcommand(1);
    std::string log_file, mine_out;
    bool self_loops = false;
    auto* alpha_cmd = mine_cmd->add_subcommand("alpha", "Discover a net with the alpha algorithm");
    alpha_cmd->add_option("log", log_file, "Event log (.csv or .xes)")->required();
    alpha_cmd->add_option("--out", mine_out, "Net JSON output");
    auto* footprint_cmd = mine_cmd->add_subcommand("footprint", "Print the footprint matrix");
    footprint_cmd->add_option("log", log_file, "Event log (.csv or .xes)")->required();
    auto* handover_cmd = mine_cmd->add_subcommand("handover", "Handover-of-work sociogram");
    handover_cmd->add_option("log", log_file, "Event log (.csv or .xes)")->required();
    handover_cmd->add_option("--out", mine_out, "DOT output");
    handover_cmd->add_flag("--include-self-loops", self_loops, "Count self-loops in degrees and DOT output");

    // replay
    auto* replay_cmd = app.add_subcommand("replay", "Token-replay a log on a net or plan");
    std::string net_file;
    replay_cmd->add_option("net", net_file, "Net JSON or plan JSON")->required();
    replay_cmd->add_option("log", log_file, "Event log (.csv or .xes)")->required();

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
    ServiceConfig config;
    serve_cmd->add_option("--port", config.port, "Port")->check(CLI::Range(1, 65535));
    serve_cmd->add_option("--host", config.host, "Bind address");
    serve_cmd->add_option("--plans", config.plan_dir, "Directory of plan JSON files");
    serve_cmd->add_option("--logs", config.log_dir, "Directory for completed-case logs");
    serve_cmd->add_option("--ui", config.ui_dir, "Static client directory served under /ui");
    serve_cmd->add_option("--cap", config.state_cap, "State-space cap")->check(CLI::PositiveNumber);

    // corpus
    auto* corpus_cmd = app.add_subcommand("corpus", "Export the built-in tsunami plan and recorded log")
                           ->require_subcommand(1);
    std::string corpus_out;
    auto* corpus_plan_cmd = corpus_cmd->add_subcommand("plan", "Write the plan JSON");
    corpus_plan_cmd->add_option("--out", corpus_out, "Output file; stdout if omitted");
    auto* corpus_fixture_cmd = corpus_cmd->add_subcommand("fixture", "Write the two-case log");
    corpus_fixture_cmd->add_option("--out", corpus_out, "Output file (.csv or .xes); stdout (CSV) if omitted");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*validate_cmd) {
            Plan plan = read_plan_document(read_text(plan_file));
            auto violations = validate_plan(plan);
            out << "plan: " << plan.id << "\n";
            out << "valid: " << boolean(violations.empty()) << "\n";
            out << "violations: " << violations.size() << "\n";
            for (const auto& v : violations) {
                out << "violation: " << to_string(v.kind) << " [";
                for (std::size_t k = 0; k < v.nodes.size(); ++k)
                    out << (k ? "," : "") << v.nodes[k];
                out << "] " << v.message << "\n";
            }
            return violations.empty() ? kExitOk : kExitViolation;
        }
        if (*soundness_cmd) {
            WorkflowNet net = plan_to_net(parse_plan(read_text(plan_file)));
            SoundnessReport report = check_soundness(net, cap);
            out << "sound: " << boolean(report.sound) << "\n";
            out << "option_to_complete: " << boolean(report.option_to_complete) << "\n";
            out << "proper_completion: " << boolean(report.proper_completion) << "\n";
            out << "dead_transitions: " << report.dead_transitions.size() << "\n";
            for (const auto& t : report.dead_transitions)
                out << "dead: " << t << "\n";
            out << "markings: " << report.markings << "\n";
            return report.sound ? kExitOk : kExitViolation;
        }
        if (*simulate_cmd) {
            Plan plan = parse_plan(read_text(sim_plan));
            SimulationPolicy policy;
            policy.seed = seed;
            EventLog log = auto_simulate(plan, n_cases, policy);
            if (sim_out.empty()) {
                out << write_csv(log);
                return kExitOk;
            }
            write_log_file(log, sim_out);
            out << "cases: " << log.traces.size() << "\n";
            out << "events: " << log.event_count() << "\n";
            out << "out: " << sim_out << "\n";
            return kExitOk;
        }
        if (*alpha_cmd) {
            auto traces = project_completions(read_log_file(log_file));
            WorkflowNet net = alpha_discover(traces);
            if (!mine_out.empty())
                write_text(mine_out, write_net_json(net));
            out << "transitions: " << net.transitions().size() << "\n";
            out << "places: " << net.places().size() << "\n";
            out << "arcs: " << net.arc_count() << "\n";
            out << "fitness: " << token_replay(net, traces).fitness() << "\n";
            if (mine_out.empty())
                out << write_net_json(net);
            return kExitOk;
        }
        if (*footprint_cmd) {
            out << footprint(project_completions(read_log_file(log_file))).to_table();
            return kExitOk;
        }
        if (*handover_cmd) {
            Sociogram g = handover_network(read_log_file(log_file));
            if (!self_loops)
                for (auto it = g.edges.begin(); it != g.edges.end();)
                    it = it->first.first == it->first.second ? g.edges.erase(it) : std::next(it);
            if (!mine_out.empty())
                write_text(mine_out, g.to_dot());
            for (const auto& [pair, w] : g.edges)
                out << "edge: " << pair.first << " -> " << pair.second << " " << w << "\n";
            auto stats = degree_stats(g, self_loops);
            std::string top;
            std::uint64_t best = 0;
            for (const auto& [actor, d] : stats) {
                out << "degree: " << actor << " in=" << d.in << " out=" << d.out << " total=" << d.total << "\n";
                if (d.total > best) {
                    best = d.total;
                    top = actor;
                }
            }
            out << "max_degree: " << top << "\n";
            return kExitOk;
        }
        if (*replay_cmd) {
            WorkflowNet net = load_net(net_file);
            FitnessReport r = token_replay(net, project_completions(read_log_file(log_file)));
            out << "produced: " << r.produced << "\n";
            out << "consumed: " << r.consumed << "\n";
            out << "missing: " << r.missing << "\n";
            out << "remaining: " << r.remaining << "\n";
            out << "fitness: " << r.fitness() << "\n";
            return r.missing == 0 && r.remaining == 0 ? kExitOk : kExitViolation;
        }
        if (*serve_cmd) {
            Service service(config);
            service.bind();
            g_running_service = &service;
            std::signal(SIGINT, handle_stop_signal);
            std::signal(SIGTERM, handle_stop_signal);
            out << "listening: http://" << config.host << ":" << service.port() << "\n" << std::flush;
            service.listen();
            g_running_service = nullptr;
            return kExitOk;
        }
        if (*corpus_plan_cmd) {
            std::string text = serialize_plan(corpus::builtin_plan());
            if (corpus_out.empty())
                out << text;
            else
                write_text(corpus_out, text);
            return kExitOk;
        }
        if (*corpus_fixture_cmd) {
            if (corpus_out.empty())
                out << write_csv(corpus::fixture_log());
            else
                write_log_file(corpus::fixture_log(), corpus_out);
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.code() << ": " << e.what() << "\n";
        return kExitViolation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitUsage;
}

} // namespace crisisflow::cli
