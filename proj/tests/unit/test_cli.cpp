#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "saftea/cli.hpp"
#include "saftea/json_io.hpp"

using namespace saftea;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& stem) {
  std::random_device rd;
  return std::filesystem::temp_directory_path() / (stem + "-" + std::to_string(rd()));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("evaluate json") {
    const Result r = run({"evaluate", "--route", "hefa", "--scenario", "base", "--format", "json"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["dcf"]["max_capex"].get<double>() < 0.0);
    CHECK(j["deviations"].size() == 1);
    CHECK(r.out == run({"evaluate", "--route", "hefa", "--scenario", "base", "--format", "json"}).out);
  }

  TEST_CASE("global flags before the subcommand") {
    const Result r = run({"--format", "json", "--currency", "brl", "evaluate", "--route", "atj", "--scenario", "s2"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["currency"] == "BRL");
  }

  TEST_CASE("table output prints deviations for named scenarios") {
    const Result r = run({"evaluate", "--route", "atj", "--scenario", "s1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Deviations") != std::string::npos);
    CHECK(r.out.find("max_capex.atj.s1") != std::string::npos);
  }

  TEST_CASE("validation errors exit 2") {
    Result r = run({"evaluate", "--route", "hefa", "--scenario", "nosuch"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown scenario") != std::string::npos);
    r = run({"demand", "--year", "2026"});
    CHECK(r.code == 2);
    CHECK(r.err.find("year outside 2027") != std::string::npos);
    CHECK(run({"evaluate"}).code == 2);
    CHECK(run({"evaluate", "--route", "hefa", "--bogus"}).code == 2);
    CHECK(run({"evaluate", "--route", "hefa", "--format", "xml"}).code == 2);
    CHECK(run({"sweep", "--route", "atj", "--lever", "carbon_price", "--from", "0", "--to", "0", "--steps", "2"}).code == 2);
  }

  TEST_CASE("package files") {
    const auto good = temp_path("pkg") += ".json";
    const auto bad = temp_path("pkg") += ".json";
    std::ofstream(good) << io::to_json(kScenario1).dump();
    std::ofstream(bad) << R"({"tax_discount": 1.5})";
    const Result from_file = run({"evaluate", "--route", "hefa", "--package", good.string(), "--format", "json"});
    const Result named = run({"evaluate", "--route", "hefa", "--scenario", "s1", "--format", "json"});
    CHECK(from_file.code == 0);
    CHECK(from_file.out == named.out);
    const Result rejected = run({"evaluate", "--route", "hefa", "--package", bad.string()});
    CHECK(rejected.code == 2);
    CHECK(rejected.err.find("tax_discount") != std::string::npos);
    CHECK(run({"evaluate", "--route", "hefa", "--package", "/nonexistent/pkg.json"}).code == 3);
    std::filesystem::remove(good);
    std::filesystem::remove(bad);
  }

  TEST_CASE("demand and sweep") {
    Result r = run({"demand", "--year", "2037", "--policy", "total", "--bound", "higher", "--format", "json"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)[0]["volume_kt_per_year"] == 7274.4);
    r = run({"sweep", "--route", "atj", "--lever", "carbon_price", "--from", "0", "--to", "400", "--steps", "5",
             "--format", "json"});
    REQUIRE(r.code == 0);
    const json rows = json::parse(r.out);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i]["max_capex"].get<double>() > rows[i - 1]["max_capex"].get<double>());
    }
    r = run({"sweep", "--route", "atj", "--lever", "carbon_price", "--from", "0", "--to", "400", "--steps", "5",
             "--format", "csv"});
    CHECK(r.out.rfind("lever_value,contribution_margin", 0) == 0);
  }

  TEST_CASE("reproduce and history") {
    Result r = run({"reproduce", "--format", "json"});
    REQUIRE(r.code == 0);
    const json rows = json::parse(r.out);
    bool saw_check = false;
    for (const auto& row : rows) {
      if (row["id"] == "check_test.hefa") {
        saw_check = true;
        CHECK(row["status"] == "MATCH");
      }
    }
    CHECK(saw_check);
    r = run({"history", "--route", "atj", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 12);
  }

  TEST_CASE("bundle export, override and missing bundle") {
    const auto dir = temp_path("bundle");
    REQUIRE(run({"bundle", "export", "--out", dir.string()}).code == 0);
    CHECK(std::filesystem::exists(dir / "prices.csv"));
    const Result a = run({"--bundle", dir.string(), "evaluate", "--route", "hefa", "--format", "json"});
    const Result b = run({"evaluate", "--route", "hefa", "--format", "json"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto stamp = std::filesystem::last_write_time(dir / "prices.csv");
    run({"--bundle", dir.string(), "reproduce"});
    CHECK(std::filesystem::last_write_time(dir / "prices.csv") == stamp);
    CHECK(run({"--bundle", dir.string(), "bundle", "export", "--out", dir.string()}).code == 2);
    std::filesystem::remove_all(dir);
    CHECK(run({"--bundle", "/nonexistent/bundle", "reproduce"}).code == 3);
  }

  TEST_CASE("help") {
    const Result r = run({"evaluate", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--route") != std::string::npos);
  }
}
