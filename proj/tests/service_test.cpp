#include "crisisflow/corpus.hpp"
#include "crisisflow/error.hpp"
#include "crisisflow/service.hpp"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

using namespace crisisflow;
using nlohmann::json;

namespace {

class ServiceTest : public ::testing::Test {
protected:
    void SetUp() override {
        log_dir_ = std::filesystem::temp_directory_path() /
                   ("crisisflow-service-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                    ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::remove_all(log_dir_);
        ServiceConfig config;
        config.log_dir = log_dir_.string();
        service_ = std::make_unique<Service>(config);
        service_->bind_any_port();
        service_->start();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", service_->port());
    }

    void TearDown() override {
        service_->stop();
        std::filesystem::remove_all(log_dir_);
    }

    json get(const std::string& path, int expect = 200) {
        auto res = client_->Get(path);
        EXPECT_TRUE(res) << path;
        if (!res)
            return {};
        EXPECT_EQ(res->status, expect) << path << " " << res->body;
        return json::parse(res->body);
    }

    json post(const std::string& path, const json& body, int expect = 200) {
        auto res = client_->Post(path, body.dump(), "application/json");
        EXPECT_TRUE(res) << path;
        if (!res)
            return {};
        EXPECT_EQ(res->status, expect) << path << " " << res->body;
        return json::parse(res->body);
    }

    json act(const std::string& item, const std::string& action, const std::string& actor, int expect = 200) {
        return post("/api/workitems/" + item + "/act", {{"action", action}, {"actor", actor}}, expect);
    }

    std::string new_case() { return post("/api/cases", {{"plan", corpus::kPlanId}}, 201)["id"]; }

    // Runs a case to completion through worklists only.
    void drive(const std::string& case_id) {
        const Plan& plan = corpus::builtin_plan();
        for (bool progressed = true; progressed;) {
            progressed = false;
            for (const auto& role : plan.roles) {
                for (const auto& item : get("/api/roles/" + role.id + "/worklist")) {
                    if (item["caseId"] != case_id)
                        continue;
                    std::string id = item["id"], actor = role.actors.front();
                    act(id, "allocate", actor);
                    act(id, "start", actor);
                    act(id, "complete", actor);
                    progressed = true;
                }
            }
        }
    }

    std::filesystem::path log_dir_;
    std::unique_ptr<Service> service_;
    std::unique_ptr<httplib::Client> client_;
};

} // namespace

TEST_F(ServiceTest, HealthAndPlans) {
    EXPECT_EQ(get("/api/health")["status"], "ok");
    json plans = get("/api/plans");
    ASSERT_TRUE(plans.is_array());
    EXPECT_EQ(plans[0]["id"], corpus::kPlanId);
    json plan = get(std::string("/api/plans/") + corpus::kPlanId);
    EXPECT_EQ(plan["tasks"].size(), 24u);
    EXPECT_EQ(get("/api/plans/missing", 404)["error"], "unknown_plan");
}

TEST_F(ServiceTest, CreateCaseAndWorklist) {
    json created = post("/api/cases", {{"plan", corpus::kPlanId}}, 201);
    EXPECT_EQ(created["status"], "running");
    json list = get("/api/roles/A1/worklist");
    ASSERT_EQ(list.size(), 1u);
    EXPECT_EQ(list[0]["taskId"], "T1");
    EXPECT_EQ(list[0]["state"], "offered");
    EXPECT_TRUE(get("/api/roles/A3/worklist").empty());
    EXPECT_EQ(get("/api/roles/A99/worklist", 404)["error"], "unknown_role");
    EXPECT_EQ(get("/api/cases").size(), 1u);
}

TEST_F(ServiceTest, LifecycleErrors) {
    new_case();
    std::string item = get("/api/roles/A1/worklist")[0]["id"];
    json err = act(item, "complete", "igp-duty-officer", 409);
    EXPECT_EQ(err["error"], "illegal_transition");
    EXPECT_TRUE(err.contains("message"));
    EXPECT_EQ(act(item, "allocate", "nobody", 400)["error"], "role_mismatch");
    EXPECT_EQ(act(item, "dance", "igp-duty-officer", 400)["error"], "malformed");
    EXPECT_EQ(act("c9.w1", "allocate", "igp-duty-officer", 404)["error"], "unknown_item");
    EXPECT_EQ(post("/api/cases", {{"plan", "nope"}}, 404)["error"], "unknown_plan");
    EXPECT_EQ(post("/api/cases", {{"plan", 3}}, 400)["error"], "malformed");
    auto res = client_->Post("/api/cases", "{not json", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    EXPECT_EQ(get("/api/cases/c77", 404)["error"], "unknown_case");
}

TEST_F(ServiceTest, StaleItemIs409) {
    std::string case_id = new_case();
    drive(case_id); // completes everything, including both police duplicates
    // A fresh case where T8 is skipped leaves a withdrawn item behind.
    std::string second = new_case();
    for (const char* task : {"T1", "T2", "T3", "T5"}) {
        for (const auto& role : {"A1", "A2"}) {
            for (const auto& item : get(std::string("/api/roles/") + role + "/worklist")) {
                if (item["caseId"] != second || item["taskId"] != task)
                    continue;
                std::string actor = role == std::string("A1") ? "igp-duty-officer" : "admin-duty-officer";
                act(item["id"], "allocate", actor);
                act(item["id"], "start", actor);
                act(item["id"], "complete", actor);
            }
        }
    }
    std::string t8;
    for (const auto& item : get("/api/roles/A3/worklist"))
        if (item["caseId"] == second && item["taskId"] == "T8")
            t8 = item["id"];
    ASSERT_FALSE(t8.empty());
    EXPECT_EQ(act(t8, "skip", "military-duty-officer")["state"], "skipped");
    EXPECT_EQ(act(t8, "allocate", "military-duty-officer", 409)["error"], "stale_item");
}

TEST_F(ServiceTest, FullCaseLogAndMining) {
    std::string case_id = new_case();
    drive(case_id);
    json state = get("/api/cases/" + case_id);
    EXPECT_EQ(state["status"], "completed");
    EXPECT_EQ(state["marking"], json({{"o", 1}}));
    EXPECT_EQ(state["tasks"]["T20"], "completed");

    auto csv = client_->Get("/api/cases/" + case_id + "/log?format=csv");
    ASSERT_TRUE(csv);
    EXPECT_EQ(csv->status, 200);
    EXPECT_EQ(read_csv(csv->body).event_count(), state["eventCount"].get<std::size_t>());
    auto xes = client_->Get("/api/cases/" + case_id + "/log?format=xes");
    ASSERT_TRUE(xes);
    EXPECT_EQ(read_xes(xes->body).traces, read_csv(csv->body).traces);
    EXPECT_EQ(get("/api/cases/" + case_id + "/log?format=pdf", 400)["error"], "malformed");
    EXPECT_TRUE(std::filesystem::exists(log_dir_ / (case_id + ".csv")));

    json alpha = post("/api/mine/alpha", {{"cases", {case_id}}});
    EXPECT_EQ(alpha["transitions"], state["eventCount"]);
    EXPECT_DOUBLE_EQ(alpha["fitness"].get<double>(), 1.0);

    json handover = post("/api/mine/handover", {{"cases", json::array()}, {"includeSelfLoops", false}});
    EXPECT_NE(handover["dot"].get<std::string>().find("digraph"), std::string::npos);
    bool a1_to_a2 = false;
    for (const auto& e : handover["edges"]) {
        EXPECT_NE(e["from"], e["to"]);
        a1_to_a2 = a1_to_a2 || (e["from"] == "igp-duty-officer" && e["to"] == "admin-duty-officer");
    }
    EXPECT_TRUE(a1_to_a2);
    EXPECT_EQ(post("/api/mine/alpha", {{"cases", {"c404"}}}, 404)["error"], "unknown_case");
}

TEST(ServiceConfigTest, Validation) {
    ServiceConfig config;
    EXPECT_TRUE(validate_config(config).empty());
    config.port = 0;
    EXPECT_EQ(validate_config(config).size(), 1u);
    config.port = 70000;
    EXPECT_THROW(Service{config}, Error);
    config.port = 8080;
    config.plan_dir = "/definitely/not/here";
    EXPECT_FALSE(validate_config(config).empty());
}

TEST(ServiceConfigTest, MalformedPlanFileReportedAtStartup) {
    auto dir = std::filesystem::temp_directory_path() / "crisisflow-bad-plans";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "broken.json") << "{\"id\": ";
    ServiceConfig config;
    config.plan_dir = dir.string();
    EXPECT_THROW(Service{config}, PlanError);
    std::filesystem::remove_all(dir);
}
