#include <doctest.h>
#include <httplib.h>

#include <future>
#include <thread>

#include "saftea/json_io.hpp"
#include "saftea/service.hpp"

using namespace saftea;
using nlohmann::json;

namespace {

const service::Service& svc() {
  static const service::Service s(default_bundle());
  return s;
}

json body_of(const service::Response& r) { return json::parse(r.body); }

void check_api_error(const service::Response& r, int status, const std::string& field) {
  CHECK(r.status == status);
  const json j = body_of(r);
  CHECK(j.contains("code"));
  CHECK(j["message"].is_string());
  if (field.empty()) {
    CHECK(j["field"].is_null());
  } else {
    CHECK(j["field"] == field);
  }
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("bundle summary with stable ETag") {
    const auto a = svc().get_bundle();
    const auto b = svc().get_bundle();
    CHECK(a.status == 200);
    CHECK(a.headers.at("ETag") == b.headers.at("ETag"));
    CHECK(a.body == b.body);
    CHECK(body_of(a)["fossil_jet_ci"] == 89.0);
  }

  TEST_CASE("evaluate") {
    const auto r = svc().post_evaluate(R"({"route":"atj","package":"s2"})");
    REQUIRE(r.status == 200);
    CHECK(body_of(r)["dcf"]["max_capex"].get<double>() > 0.0);
    const auto custom = svc().post_evaluate(R"({"route":"hefa","package":{"carbon_price":100},"currency":"brl"})");
    REQUIRE(custom.status == 200);
    CHECK(body_of(custom)["currency"] == "BRL");
    CHECK(body_of(custom)["package_name"].is_null());
  }

  TEST_CASE("evaluate errors") {
    check_api_error(svc().post_evaluate(R"({"route":"hefa","package":{"tax_discount":2}})"), 422, "tax_discount");
    check_api_error(svc().post_evaluate(R"({"route":"hefa","package":{"tax_discount":"x"}})"), 400, "tax_discount");
    check_api_error(svc().post_evaluate(R"({"route":"ft","package":"base"})"), 400, "route");
    check_api_error(svc().post_evaluate(R"({"route":"hefa"})"), 400, "package");
    check_api_error(svc().post_evaluate(R"({"route":"hefa","package":"base","extra":1})"), 400, "extra");
    check_api_error(svc().post_evaluate("{oops"), 400, "body");
    check_api_error(svc().post_evaluate(R"({"route":"hefa","package":"base","price_basis":"table99"})"), 400,
                    "price_basis");
  }

  TEST_CASE("sweep matches individual evaluations") {
    const auto r = svc().post_sweep(
        R"({"route":"atj","spec":{"lever":"carbon_price","from":0,"to":400,"steps":5}})");
    REQUIRE(r.status == 200);
    const json rows = body_of(r)["rows"];
    REQUIRE(rows.size() == 5);
    for (const auto& row : rows) {
      const json req = {{"route", "atj"}, {"package", {{"carbon_price", row["lever_value"]}}}};
      const json e = body_of(svc().post_evaluate(req.dump()));
      CHECK(row["max_capex"] == e["dcf"]["max_capex"]);
      CHECK(row["net_margin"] == e["margin"]["net_margin"]);
    }
    check_api_error(svc().post_sweep(R"({"route":"atj","spec":{"lever":"carbon_price","from":0,"to":1,"steps":1}})"),
                    400, "spec.steps");
    check_api_error(svc().post_sweep(R"({"route":"atj","spec":{"lever":"tax_discount","from":0,"to":2,"steps":3}})"),
                    422, "spec.tax_discount");
  }

  TEST_CASE("demand") {
    const auto r = svc().get_demand({{"year", "2037"}, {"policy", "total"}, {"bound", "higher"}});
    REQUIRE(r.status == 200);
    CHECK(body_of(r)["records"][0]["volume_kt_per_year"] == 7274.4);
    CHECK(body_of(svc().get_demand({{"year", "2029"}}))["records"].size() == 6);
    check_api_error(svc().get_demand({{"year", "2026"}}), 400, "year");
    check_api_error(svc().get_demand({{"year", "2028"}}), 400, "year");
    CHECK(svc().get_demand({{"year", "2028"}, {"interpolate", "true"}}).status == 200);
    check_api_error(svc().get_demand({{"year", "abc"}}), 400, "year");
    check_api_error(svc().get_demand({{"year", "2027"}, {"policy", "eu"}}), 400, "policy");
  }

  TEST_CASE("routing") {
    check_api_error(svc().handle("GET", "/v1/nothing", {}, ""), 404, "");
    check_api_error(svc().handle("GET", "/v1/evaluate", {}, ""), 405, "");
    CHECK(svc().handle("GET", "/v1/bundle", {}, "").status == 200);
  }

  TEST_CASE("handlers are stateless under concurrency") {
    const std::string req = R"({"route":"hefa","package":"s1"})";
    const std::string expected = svc().post_evaluate(req).body;
    std::vector<std::future<std::string>> futures;
    for (int i = 0; i < 16; ++i) {
      futures.push_back(std::async(std::launch::async, [&] { return svc().post_evaluate(req).body; }));
    }
    for (auto& f : futures) CHECK(f.get() == expected);
  }

  TEST_CASE("http server") {
    std::promise<int> ready;
    std::thread server([&] {
      service::run_server(svc(), {"127.0.0.1", 0}, [&](int port) { ready.set_value(port); });
    });
    const int port = ready.get_future().get();
    httplib::Client client("127.0.0.1", port);

    auto bundle = client.Get("/v1/bundle");
    REQUIRE(bundle);
    CHECK(bundle->status == 200);
    CHECK(bundle->get_header_value("ETag") == svc().etag());
    CHECK(bundle->get_header_value("Access-Control-Allow-Origin") == "*");
    CHECK(bundle->get_header_value("Content-Type") == "application/json");

    auto eval = client.Post("/v1/evaluate", R"({"route":"hefa","package":"base"})", "application/json");
    REQUIRE(eval);
    CHECK(eval->status == 200);
    CHECK(eval->body == svc().post_evaluate(R"({"route":"hefa","package":"base"})").body);

    auto bad = client.Post("/v1/evaluate", R"({"route":"hefa","package":{"tax_discount":2}})", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 422);

    auto demand = client.Get("/v1/demand?year=2037&policy=total&bound=higher");
    REQUIRE(demand);
    CHECK(json::parse(demand->body)["records"][0]["volume_kt_per_year"] == 7274.4);

    auto options = client.Options("/v1/evaluate");
    REQUIRE(options);
    CHECK(options->status == 204);
    CHECK(options->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);

    std::promise<int> second_ready;
    CHECK_THROWS_AS(service::run_server(svc(), {"127.0.0.1", port}), service::PortInUse);

    service::stop_server();
    server.join();
  }
}
