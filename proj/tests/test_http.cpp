#include "cdtc/http.hpp"

#include "harness.hpp"

#include <doctest.h>
#include <httplib.h>

#include <thread>

using namespace cdtc;
using nlohmann::json;

namespace {

struct Api {
  Api()
      : course(testing::load_fixture("anemia.cdtc")),
        dir("http"),
        service(testing::package_of(course), dir.path(), testing::fixed_options(31)) {}

  ApiResponse call(std::string_view method, std::string_view path, const json& body = nullptr) {
    return dispatch(service, method, path, body.is_null() ? "" : body.dump());
  }

  json answer_body(const json& decision, bool correct) {
    return {{"item_id", decision["item_id"]},
            {"assessment_id", decision["assessment_id"]},
            {"response", testing::presented_response(course, decision, correct)},
            {"elapsed_seconds", 5}};
  }

  Course course;
  testing::TempDir dir;
  Service service;
};

} // namespace

TEST_SUITE("http") {

TEST_CASE("status mapping") {
  CHECK(http_status(ErrorCode::UnknownCourse) == 404);
  CHECK(http_status(ErrorCode::UnknownModule) == 404);
  CHECK(http_status(ErrorCode::SessionNotFound) == 404);
  CHECK(http_status(ErrorCode::ItemMismatch) == 409);
  CHECK(http_status(ErrorCode::ResponseShapeMismatch) == 422);
  CHECK(http_status(ErrorCode::ElapsedOutOfRange) == 422);
  CHECK(http_status(ErrorCode::NegativeElapsed) == 422);
  CHECK(http_status(ErrorCode::MalformedRequest) == 422);
  CHECK(http_status(ErrorCode::StorageFailure) == 500);
}

TEST_CASE("catalogue routes") {
  Api api;
  auto courses = api.call("GET", "/api/courses");
  CHECK(courses.status == 200);
  CHECK(courses.body[0]["course_id"] == "ila-anaemia");
  auto modules = api.call("GET", "/api/courses/ila-anaemia/modules");
  CHECK(modules.status == 200);
  CHECK(modules.body[0]["module_id"] == "anemia");
  auto missing = api.call("GET", "/api/courses/nope/modules");
  CHECK(missing.status == 404);
  CHECK(missing.body["code"] == "UnknownCourse");
  CHECK(api.call("GET", "/api/nothing").status == 404);
  CHECK(api.call("DELETE", "/api/courses").status == 404);
}

TEST_CASE("session flow") {
  Api api;
  auto bad = api.call("POST", "/api/learners/ana/sessions", json{{"course_id", "ila-anaemia"}});
  CHECK(bad.status == 422);
  CHECK(bad.body["code"] == "MalformedRequest");
  CHECK(dispatch(api.service, "POST", "/api/learners/ana/sessions", "{oops").status == 422);
  CHECK(api.call("POST", "/api/learners/ana/sessions",
                 json{{"course_id", "ila-anaemia"}, {"module_id", "x"}})
            .status == 404);
  CHECK(api.call("POST", "/api/learners/a.b/sessions",
                 json{{"course_id", "ila-anaemia"}, {"module_id", "anemia"}})
            .status == 422);

  auto started = api.call("POST", "/api/learners/ana/sessions",
                          json{{"course_id", "ila-anaemia"}, {"module_id", "anemia"}});
  REQUIRE(started.status == 201);
  std::string sid = started.body["session_id"];
  json d = started.body["decision"];
  CHECK(api.call("GET", "/api/sessions/" + sid + "/next").body["decision"] == d);
  CHECK(api.call("GET", "/api/sessions/zzz/next").status == 404);

  json wrong = api.answer_body(d, true);
  wrong["assessment_id"] = "nope";
  CHECK(api.call("POST", "/api/sessions/" + sid + "/answer", wrong).status == 409);
  json slow = api.answer_body(d, true);
  slow["elapsed_seconds"] = 4000;
  CHECK(api.call("POST", "/api/sessions/" + sid + "/answer", slow).body["code"] == "ElapsedOutOfRange");
  json shape = api.answer_body(d, true);
  shape["response"] = {{"choice", "first"}};
  CHECK(api.call("POST", "/api/sessions/" + sid + "/answer", shape).status == 422);
  json other = api.answer_body(d, true);
  other["session_id"] = "s0-x";
  CHECK(api.call("POST", "/api/sessions/" + sid + "/answer", other).status == 422);

  auto ok = api.call("POST", "/api/sessions/" + sid + "/answer", api.answer_body(d, true));
  CHECK(ok.status == 200);
  CHECK(ok.body["score"]["final_points"] == 1);
  CHECK(ok.body.contains("mastery"));
  CHECK(ok.body["decision"]["type"] == "item");

  auto progress = api.call("GET", "/api/learners/ana/progress");
  CHECK(progress.status == 200);
  CHECK(progress.body["modules"]["anemia"]["attempts"] == 1);
}

TEST_CASE("server over a real socket") {
  Api api;
  HttpServer server(api.service);
  int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&] { server.listen(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto courses = client.Get("/api/courses");
  REQUIRE(courses);
  CHECK(courses->status == 200);
  CHECK(courses->get_header_value("Access-Control-Allow-Origin") == "*");
  CHECK(json::parse(courses->body)[0]["course_id"] == "ila-anaemia");

  auto started = client.Post("/api/learners/ana/sessions",
                             R"({"course_id":"ila-anaemia","module_id":"anemia"})",
                             "application/json");
  REQUIRE(started);
  CHECK(started->status == 201);
  json body = json::parse(started->body);
  std::string sid = body["session_id"];
  auto answered = client.Post("/api/sessions/" + sid + "/answer",
                              api.answer_body(body["decision"], false).dump(), "application/json");
  REQUIRE(answered);
  CHECK(answered->status == 200);
  CHECK(json::parse(answered->body)["score"]["correct"] == false);

  auto preflight = client.Options("/api/courses");
  REQUIRE(preflight);
  CHECK(preflight->status == 204);

  server.stop();
  loop.join();
}

}
