#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#ifndef OMNIPIPE_CLI_PATH
#error "OMNIPIPE_CLI_PATH must name the omnipipe executable"
#endif

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const fs::path dir = fs::temp_directory_path() / "omnipipe_cli_test";
  fs::create_directories(dir);
  const fs::path capture = dir / "stdout.txt";
  const std::string cmd = std::string("\"") + OMNIPIPE_CLI_PATH + "\" " + args + " > \"" +
                          capture.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "omnipipe_cli_test" / name;
  fs::remove_all(p);
  return p.string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("fk and ik") {
    auto r = run("fk --cmd 2,2,2,0 --r 15 --l 60");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["vcz"].get<double>() == doctest::Approx(30.0));
    CHECK(j["wx"].get<double>() == 0.0);

    r = run("fk --cmd 1,2,3,0 --r 15 --l 60");
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["wx"].get<double>() == doctest::Approx(0.14434).epsilon(1e-4));
    CHECK(j["wy"].get<double>() == doctest::Approx(0.25));

    r = run("ik --twist 0,0,5,0");
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["th4"].get<double>() == doctest::Approx(5.0));
    CHECK(std::abs(j["th1"].get<double>()) < 1e-12);
  }

  TEST_CASE("exit codes") {
    CHECK(run("fk --cmd 1,2").code == 2);
    CHECK(run("fk --cmd a,b,c,d").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("fk --cmd 1,1,1,0 --r 0").code == 3);
    CHECK(run("ik --twist 0,0,1,0 --l 0").code == 3);
    CHECK(run("sector --reach-max 70").code == 4);
    CHECK(run("fk --help").code == 0);
    CHECK(run("montecarlo --help").code == 0);
  }

  TEST_CASE("sector report") {
    auto r = run("sector");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["sector_deg"].get<double>() == doctest::Approx(96.54).epsilon(1e-4));
    CHECK(j["failure_probability"].get<double>() == doctest::Approx(0.8045).epsilon(1e-4));
    CHECK(j["arcs"].size() == 2);
    r = run("sector --reach-max 200");
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["sector_deg"].get<double>() == 0.0);
  }

  TEST_CASE("missions") {
    const auto ok = scratch("sim_ok");
    CHECK(run("simulate --theta5 30 --out " + ok).code == 0);
    CHECK(fs::exists(fs::path(ok) / "trajectory.csv"));
    CHECK(fs::exists(fs::path(ok) / "outcome.json"));
    CHECK(run("simulate --theta5 30 --no-holonomic --out " + scratch("sim_fail")).code == 5);
    const auto plan = scratch("plan");
    CHECK(run("plan --theta5 30 --out " + plan).code == 0);
    std::ifstream in(fs::path(plan) / "plan.json");
    const auto j = nlohmann::json::parse(in);
    REQUIRE(j["steps"].size() == 5);
    CHECK(j["steps"][0]["kind"] == "drive");
    CHECK(j["steps"][1]["kind"] == "holonomic_rotate");
    CHECK(j["steps"][3]["kind"] == "turn_tee");
    CHECK(run("simulate --network /nonexistent.json").code == 2);
  }
}
