#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "betalab.h"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

std::pair<int, json> run(const std::string& cfg) {
  betalab_result* res = nullptr;
  int status = betalab_run_json(cfg.c_str(), &res);
  CHECK(status == betalab_result_status(res));
  json report = json::parse(betalab_result_report(res));
  betalab_result_free(res);
  return {status, report};
}

}  // namespace

TEST_CASE("equilibrium run succeeds and embeds the resolved config") {
  auto [status, rep] = run(R"({"command":"equilibrium"})");
  CHECK(status == BETALAB_OK);
  CHECK(rep["equilibrium"]["support"][0].get<double>() == doctest::Approx(-2.0));
  CHECK(rep["equilibrium"]["support"][1].get<double>() == doctest::Approx(2.0));
  CHECK(rep["config"]["potential"].size() == 3);  // defaults filled in
  CHECK(rep["csv"]["density"].get<std::string>().rfind("lambda,rho", 0) == 0);
}

TEST_CASE("reports are reproducible from the embedded config") {
  auto [s1, r1] = run(R"({"command":"sample","n":6,"beta":2,"steps":2000,"chains":2})");
  REQUIRE(s1 == BETALAB_OK);
  auto [s2, r2] = run(r1["config"].dump());
  REQUIRE(s2 == BETALAB_OK);
  CHECK(r1["mean"].get<double>() == r2["mean"].get<double>());
  CHECK(r1["variance"].get<double>() == r2["variance"].get<double>());
}

TEST_CASE("malformed input maps to the domain status") {
  betalab_result* res = nullptr;
  CHECK(betalab_run_json("{not json", &res) == BETALAB_ERR_DOMAIN);
  betalab_result_free(res);

  auto [s1, r1] = run(R"({"command":"fly"})");
  CHECK(s1 == BETALAB_ERR_DOMAIN);
  CHECK(r1["kind"] == "domain");

  // double well: equilibrium validation rejects it
  auto [s2, r2] = run(R"({"command":"equilibrium","potential":[0,0,-1,0,0.25]})");
  CHECK(s2 == BETALAB_ERR_DOMAIN);

  auto [s3, r3] = run(R"({"command":"correction","potential":[0,"x"]})");
  CHECK(s3 == BETALAB_ERR_DOMAIN);

  CHECK(betalab_run_json(nullptr, &res) == BETALAB_ERR_DOMAIN);
  betalab_result_free(res);
}

TEST_CASE("invariant suite passes on the default ensemble") {
  auto [status, rep] = run(R"({"command":"check"})");
  CHECK(status == BETALAB_OK);
  CHECK(rep["pass"].get<bool>());
  CHECK(rep["checks"].size() >= 6);
}

TEST_CASE("named determinant identity check") {
  auto [status, rep] = run(R"({"command":"check","target":"stojanovic","n":2})");
  CHECK(status == BETALAB_OK);
  CHECK(rep["relative_error"].get<double>() < 1e-6);
}

TEST_CASE("version string is stable") {
  CHECK(std::string(betalab_version()) == "0.1.0");
}
