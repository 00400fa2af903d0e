#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef PARTMETRICS_CLI_PATH
#error "PARTMETRICS_CLI_PATH must be defined"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd =
      env_prefix + " " + std::string(PARTMETRICS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string("/tmp/partmetrics_test_") + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("score: identical files give nmi = 1, exit 0") {
  auto t = write_temp("t.part", "a\na\nb\nb\nc\nc\n");
  auto r = run_cli("score " + t + " " + t + " --metric nmi");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("nmi") != std::string::npos);
  CHECK(r.out.find(" 1 ") != std::string::npos);
}

TEST_CASE("score: known adjusted value via json") {
  // N=2: one-block vs singletons under one-sided all-model AMI is -1
  auto c = write_temp("ob2.part", "0\n0\n");
  auto t = write_temp("sg2.part", "0\n1\n");
  auto r = run_cli("score " + c + " " + t +
                   " --metric ami --model all --sided one --estimator enum --json");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["metrics"][0]["score"].get<double>() == doctest::Approx(-1.0));
}

TEST_CASE("exit codes") {
  auto t4 = write_temp("t4.part", "a\na\nb\nb\n");
  auto t6 = write_temp("t6.part", "a\na\nb\nb\nc\nc\n");

  SUBCASE("parse error -> 2") {
    auto r = run_cli("score /nonexistent.part " + t4 + " --metric nmi");
    CHECK(r.exit_code == 2);
    auto bad = write_temp("bad.part", "0\tx\n0\ty\n");
    CHECK(run_cli("score " + bad + " " + bad + " --metric nmi").exit_code == 2);
  }
  SUBCASE("N mismatch -> 3") {
    auto r = run_cli("score " + t4 + " " + t6 + " --metric nmi");
    CHECK(r.exit_code == 3);
  }
  SUBCASE("undefined metric -> 4") {
    auto ob = write_temp("ob4.part", "x\nx\nx\nx\n");
    auto r = run_cli("score " + t4 + " " + ob +
                     " --metric rrnmi --model perm --estimator exact");
    CHECK(r.exit_code == 4);
  }
  SUBCASE("enumeration beyond the cap -> 5") {
    std::string big;
    for (int i = 0; i < 13; ++i) big += std::to_string(i) + "\n";
    auto p = write_temp("t13.part", big);
    auto r = run_cli("expect " + p + " --model all --estimator enum");
    CHECK(r.exit_code == 5);
  }
  SUBCASE("PARTMETRICS_ENUM_CAP lowers the cap") {
    std::string six;
    for (int i = 0; i < 6; ++i) six += std::to_string(i) + "\n";
    auto p = write_temp("t6b.part", six);
    auto r = run_cli("expect " + p + " --model all --estimator enum",
                     "PARTMETRICS_ENUM_CAP=5");
    CHECK(r.exit_code == 5);
    CHECK(run_cli("expect " + p + " --model all --estimator enum").exit_code == 0);
  }
  SUBCASE("unknown verify suite -> 2") {
    CHECK(run_cli("verify not-a-suite").exit_code == 2);
  }
  SUBCASE("unknown metric -> 2") {
    CHECK(run_cli("score " + t4 + " " + t4 + " --metric bogus").exit_code == 2);
  }
}

TEST_CASE("expect: enumeration value and json schema") {
  auto t = write_temp("sg2b.part", "0\n1\n");
  auto r = run_cli("expect " + t + " --model all --estimator enum --json");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["mean"].get<double>() == doctest::Approx(0.34657359027997264));
  CHECK(j["stdError"].get<double>() == 0.0);
  CHECK(j["estimator"] == "enumerate");
  CHECK(j["sampleCount"] == 2);

  // one-block truth under perm: zero expectation
  auto ob = write_temp("ob3.part", "q\nq\nq\n");
  auto r2 = run_cli("expect " + ob + " --model perm --estimator exact --json");
  REQUIRE(r2.exit_code == 0);
  CHECK(nlohmann::json::parse(r2.out)["mean"].get<double>() == 0.0);
}

TEST_CASE("expect: bits conversion") {
  auto t = write_temp("sg2c.part", "0\n1\n");
  auto r = run_cli("expect " + t + " --model all --estimator enum --json --bits");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["mean"].get<double>() == doctest::Approx(0.5));  // (log2/2) in bits
  CHECK(j["units"] == "bits");
}

TEST_CASE("score --csv emits the stable schema") {
  auto t = write_temp("csv_t.part", "a\na\nb\nb\n");
  auto r = run_cli("score " + t + " " + t + " --metric nmi,rrnmi --model perm --csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("metric,score,band,degenerate,undefined\n", 0) == 0);
  CHECK(r.out.find("nmi,1,0,0,0") != std::string::npos);
  CHECK(r.out.find("rrnmi,1,0,0,0") != std::string::npos);
}

TEST_CASE("monte carlo scoring is byte-deterministic") {
  auto c = write_temp("mc_c.part", "0\n0\n1\n1\n2\n2\n3\n3\n");
  auto t = write_temp("mc_t.part", "0\n0\n0\n1\n1\n1\n2\n2\n");
  const std::string args = "score " + c + " " + t +
                           " --metric ami --model all --sided one --estimator mc"
                           " --samples 2000 --seed 7 --json";
  auto a = run_cli(args);
  auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("trap CSV is byte-identical across reruns and thread counts") {
  const std::string args =
      "trap --n 20 --k 4 --mu 0,0.5,1 --replicates 2 --samples 400 --seed 9";
  auto a = run_cli(args, "PARTMETRICS_THREADS=1");
  auto b = run_cli(args, "PARTMETRICS_THREADS=1");
  auto c = run_cli(args, "PARTMETRICS_THREADS=3");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out.rfind("mu,replicate,guess,metric,score,stderr\n", 0) == 0);
}

TEST_CASE("verify --list and a fast suite") {
  auto l = run_cli("verify --list");
  CHECK(l.exit_code == 0);
  for (const char* s : {"self-specialization", "exchangeability", "rrnmi-cnmi",
                        "mediant", "cnmi-ami-gap", "free-lunch"})
    CHECK(l.out.find(s) != std::string::npos);

  auto r = run_cli("verify exchangeability --trials 8 --max-n 5 --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[PASS] exchangeability") != std::string::npos);
}
