#include <gtest/gtest.h>

#include <httplib.h>

#include "fountain/error.hpp"
#include "fountain/graph/schema.hpp"
#include "fountain/service/http_server.hpp"
#include "temp_dir.hpp"

namespace fountain::service {
namespace {

using nlohmann::json;

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ServiceConfig c;
    c.data_dir = dir / "data";
    c.sync_writes = false;
    svc = std::make_unique<Service>(c, std::make_unique<embed::HashedTokenProvider>());
    server = std::make_unique<HttpServer>(*svc);
    port = server->start("127.0.0.1", 0);
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  void TearDown() override { server->stop(); }

  std::pair<int, json> post(const std::string& path, const std::string& body,
                            const char* type = "application/json") {
    const auto r = client->Post(path.c_str(), body, type);
    EXPECT_TRUE(r) << path;
    return {r->status, json::parse(r->body)};
  }
  std::pair<int, json> get(const std::string& path) {
    const auto r = client->Get(path.c_str());
    EXPECT_TRUE(r) << path;
    EXPECT_EQ(r->get_header_value("Content-Type"), "application/json");
    return {r->status, json::parse(r->body)};
  }

  testing::TempDir dir;
  std::unique_ptr<Service> svc;
  std::unique_ptr<HttpServer> server;
  std::unique_ptr<httplib::Client> client;
  int port = 0;
};

TEST_F(HttpTest, EndToEnd) {
  EXPECT_GT(port, 0);
  auto [s, body] = post("/api/v1/admin/ingest/bom",
                        "part_id,parent_id,part_name,level,quantity\nP1,,exhaust,0,1\nP2,P1,catalyst,1,1\n",
                        "text/csv");
  ASSERT_EQ(s, 200) << body.dump();
  EXPECT_EQ(body.at("parts_created"), 2);
  std::tie(s, body) = post("/api/v1/admin/ingest/fmea",
                           "fmea_id,fmea_type,part_id,failure_mode,cause,effect,detection,prevention\n"
                           "F-1,D,P2,crack,heat,leak,,\n",
                           "text/csv");
  ASSERT_EQ(s, 200) << body.dump();

  std::tie(s, body) = post("/api/v1/deviations", R"({"part_ref":"catalyst","requested_deviation":"more heat"})");
  ASSERT_EQ(s, 201) << body.dump();
  const auto dev = body.at("deviation_id").get<std::uint64_t>();
  const auto failure = body.at("recommendations").at(0).at("failure_id").get<std::uint64_t>();

  std::tie(s, body) = get("/api/v1/failures/" + std::to_string(failure) + "/explanation?deviation=" +
                          std::to_string(dev));
  ASSERT_EQ(s, 200);
  EXPECT_EQ(body.at("causes").at(0).at("text"), "heat");
  EXPECT_TRUE(body.at("causes").at(0).at("similarity").is_number());

  std::tie(s, body) = get("/api/v1/failures/" + std::to_string(failure) + "/explanation");
  EXPECT_EQ(body.at("causes").at(0).at("similarity"), nullptr);

  std::tie(s, body) = post("/api/v1/feedback", json{{"deviation_id", dev}, {"item_ref", failure},
                                                    {"verdict", "useful"}}.dump());
  EXPECT_EQ(s, 201);
  std::tie(s, body) = post("/api/v1/risk-text", json{{"deviation_id", dev}, {"failure_id", failure}}.dump());
  EXPECT_EQ(s, 200);
  EXPECT_EQ(body.at("text"), "RISK: crack\n  CAUSE: heat\n");

  std::tie(s, body) = get("/api/v1/stats/feedback");
  EXPECT_EQ(s, 200);
  // Both records are anonymous and useful for the same item.
  EXPECT_EQ(body.at("useful_items"), 1);

  std::tie(s, body) = post("/api/v1/admin/snapshot", "");
  EXPECT_EQ(s, 200);
  EXPECT_TRUE(std::filesystem::exists(body.at("path").get<std::string>()));

  std::tie(s, body) = get("/api/v1/health");
  EXPECT_EQ(body.at("feedback_records"), 2);
}

TEST_F(HttpTest, JsonErrors) {
  auto [s, body] = post("/api/v1/deviations", "{not json");
  EXPECT_EQ(s, 400);
  EXPECT_EQ(body.at("error").at("code"), "InvalidArgument");
  std::tie(s, body) = post("/api/v1/feedback", R"({"deviation_id":1,"item_ref":2,"verdict":"maybe"})");
  EXPECT_EQ(s, 400);
  std::tie(s, body) = get("/api/v1/failures/12345/explanation");
  EXPECT_EQ(s, 404);
  EXPECT_EQ(body.at("error").at("code"), "UnknownNode");
  std::tie(s, body) = get("/api/v1/nowhere");
  EXPECT_EQ(s, 404);
  EXPECT_EQ(body.at("error").at("code"), "NotFound");
  std::tie(s, body) = post("/api/v1/admin/ingest/bom", "part_id\n", "text/csv");
  EXPECT_EQ(s, 400);
  EXPECT_EQ(body.at("error").at("code"), "MalformedRow");
}

TEST_F(HttpTest, OrphanQueryParameter) {
  const std::string fmea =
      "fmea_id,fmea_type,part_id,failure_mode,cause,effect,detection,prevention\nF-1,D,P9,crack,heat,leak,,\n";
  EXPECT_EQ(post("/api/v1/admin/ingest/fmea", fmea, "text/csv").first, 400);
  EXPECT_EQ(post("/api/v1/admin/ingest/fmea?allow_orphans=true", fmea, "text/csv").first, 200);
}

TEST(HttpServerTest, BindConflictThrows) {
  testing::TempDir dir;
  ServiceConfig c;
  c.data_dir = dir / "data";
  Service svc(c, std::make_unique<embed::HashedTokenProvider>());
  HttpServer a(svc);
  const int port = a.start("127.0.0.1", 0);
  HttpServer b(svc);
  try {
    b.bind("127.0.0.1", port);
    ADD_FAILURE() << "second bind succeeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
  a.stop();
  a.stop();
}

}  // namespace
}  // namespace fountain::service
