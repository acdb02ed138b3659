#include <doctest.h>

#include <string>

#include "regdet/cli.hpp"

using namespace regdet;

TEST_SUITE("cli") {
  TEST_CASE("det2 without a mass shift is one") {
    RunConfig c;
    c.m1 = 0.0;
    const auto out = run("det2", c);
    CHECK(out.exit_code == 0);
    CHECK(out.document["results"][0]["value"].get<double>() == 1.0);
    CHECK(out.document["pass"].get<bool>());
  }

  TEST_CASE("invalid surface is a validation error naming the parameter") {
    RunConfig c;
    c.surface = "sphere:R=0";
    const auto out = run("det-zeta", c);
    CHECK(out.exit_code == 1);
    CHECK(out.document["error"]["parameter"].get<std::string>() == "R");
    CHECK_FALSE(out.document["pass"].get<bool>());
  }

  TEST_CASE("unknown command") {
    const auto out = run("frobnicate", RunConfig{});
    CHECK(out.exit_code == 1);
    CHECK(out.document["error"]["parameter"].get<std::string>() == "command");
  }

  TEST_CASE("document layout") {
    RunConfig c;
    c.surface = "torus:L1=1,L2=2";
    const auto out = run("heat-trace", c);
    CHECK(out.exit_code == 0);
    for (const char* key : {"command", "inputs", "results", "pass", "runtime_ms", "version", "timestamp"}) {
      CHECK(out.document.contains(key));
    }
    CHECK(out.document["inputs"]["seed"].get<std::uint64_t>() == 20240917u);
    const std::string csv = render(out, OutputFormat::Csv);
    CHECK(csv.rfind("path,value\n", 0) == 0);
    CHECK(csv.find("results[0].value,") != std::string::npos);
    const std::string json = render(out, OutputFormat::Json);
    CHECK(json.back() == '\n');
    CHECK(json.find("\"command\": \"heat-trace\"") != std::string::npos);
  }

  TEST_CASE("anomaly command passes on the unit sphere") {
    RunConfig c;
    const auto out = run("verify-anomaly", c);
    CHECK(out.exit_code == 0);
    CHECK(out.document["results"][0]["rel_residual"].get<double>() < 1e-6);
  }

  TEST_CASE("cf on a torus reports both routes") {
    RunConfig c;
    c.surface = "torus:L1=1,L2=1";
    const auto out = run("cf", c);
    REQUIRE(out.document["results"].size() == 3);
    CHECK(out.document["results"][0]["source"].get<std::string>() == "heat-integral");
    CHECK(out.document["results"][1]["source"].get<std::string>() == "image-sum");
  }

  TEST_CASE("massless command needs positive sigma") {
    RunConfig c;
    c.sigma = 0.0;
    CHECK(run("verify-massless", c).exit_code == 1);
  }
}
