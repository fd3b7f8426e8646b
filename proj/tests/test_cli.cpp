#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pmstar/cli.hpp"

using namespace pmstar;
using nlohmann::json;

namespace {

const std::string kData = PMSTAR_TEST_DATA_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int code = -1;
  std::string out;
};

int call(const std::vector<std::string>& args, std::string* out = nullptr,
         std::string* err = nullptr) {
  std::vector<const char*> argv{"pmstar"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

// Runs the installed binary; stderr is discarded.
Outcome spawn(const std::string& args) {
  Outcome r;
  const std::string cmd = std::string("\"") + PMSTAR_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string digest_line(const std::string& text) {
  const auto pos = text.find("digest: ");
  if (pos == std::string::npos) return {};
  return text.substr(pos + 8, 16);
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pmstar_test_" + name);
}

}  // namespace

TEST_CASE("problem config round trip") {
  const auto prob = cli::parse_fredholm_config(slurp(kData + "/constant02.json"));
  CHECK(prob.a == 0.0);
  CHECK(prob.b == 1.0);
  CHECK(prob.m == 41);
  CHECK(prob.kernels[fredholm::K22](0.3, 0.9) == 0.2);
  CHECK(prob.sources[1](0.5) == 1.0);
  const auto cond = fredholm::check_contraction_condition(prob);
  CHECK(cond.kappa == doctest::Approx(0.8));

  const auto tab = cli::parse_fredholm_config(slurp(kData + "/tabulated.json"));
  CHECK(tab.a == -1.0);
  CHECK(tab.kernels[fredholm::K11](-1.0, -1.0) == doctest::Approx(0.1));
  CHECK(tab.kernels[fredholm::K21](0.5, 0.5) == doctest::Approx(-0.025));
  CHECK(tab.sources[0](-0.5) == doctest::Approx(1.0));
  CHECK(tab.sources[1](1.0) == doctest::Approx(0.5));
}

TEST_CASE("config errors name the offending field") {
  auto message = [](const std::string& text) -> std::string {
    try {
      (void)cli::parse_fredholm_config(text);
    } catch (const cli::ConfigError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(slurp(kData + "/missing_k22.json")).find("kernels.K22") != std::string::npos);
  CHECK(message(slurp(kData + "/reversed_interval.json")).find("interval") != std::string::npos);
  CHECK(message(slurp(kData + "/malformed.json")).find("line 5") != std::string::npos);

  auto doc = json::parse(slurp(kData + "/constant02.json"));
  doc["extra"] = 1;
  CHECK(message(doc.dump()).find("extra") != std::string::npos);

  doc = json::parse(slurp(kData + "/constant02.json"));
  doc["kernels"]["K12"] = {{"type", "constant"}, {"value", 0.2}, {"scale", 2}};
  CHECK(message(doc.dump()).find("kernels.K12") != std::string::npos);

  doc = json::parse(slurp(kData + "/constant02.json"));
  doc["kernels"]["K11"] = {{"type", "table"}, {"values", {{1.0, 2.0}, {3.0}}}};
  CHECK_FALSE(message(doc.dump()).empty());

  doc = json::parse(slurp(kData + "/constant02.json"));
  doc["m"] = 1;
  CHECK(message(doc.dump()).find("m") != std::string::npos);

  doc = json::parse(slurp(kData + "/constant02.json"));
  doc["g"]["g1"] = {{"type", "spline"}};
  CHECK(message(doc.dump()).find("g.g1") != std::string::npos);
}

TEST_CASE("digest ignores wall time") {
  json a = {{"command", "x"}, {"ok", true}, {"wall_time_ms", 3.0}};
  json b = a;
  b["wall_time_ms"] = 97.5;
  b["digest"] = "anything";
  CHECK(cli::report_digest(a) == cli::report_digest(b));
  CHECK(cli::report_digest(a).size() == 16);
  b["ok"] = false;
  CHECK(cli::report_digest(a) != cli::report_digest(b));
}

TEST_CASE("exit codes in process") {
  std::string out, err;
  CHECK(call({"check-axioms", "--trials", "300"}, &out) == 0);
  CHECK(out.find("result: pass") != std::string::npos);
  CHECK(call({"check-axioms", "--space", "ratio", "--trials", "300"}) == 0);
  CHECK(call({"check-axioms", "--space", "nope"}) == 2);
  CHECK(call({"check-axioms", "--trials", "0"}) == 2);
  CHECK(call({"check-axioms", "--bogus"}) == 2);
  CHECK(call({}) == 2);
  CHECK(call({"hadzic", "--tnorm", "min"}) == 0);
  CHECK(call({"hadzic", "--tnorm", "product"}, &out) == 1);
  CHECK(out.find("counterexample") != std::string::npos);
  CHECK(call({"hadzic", "--eps", "1.5"}) == 2);
  CHECK(call({"fixed-point", "--alpha", "1"}) == 2);
  CHECK(call({"fredholm", "solve", kData + "/missing_k22.json"}, &out, &err) == 2);
  CHECK(err.find("kernels.K22") != std::string::npos);
  CHECK(call({"fredholm", "solve", kData + "/does_not_exist.json"}) == 2);
  CHECK(call({"fredholm", "solve", kData + "/constant02.json", "--method", "gauss"}) == 2);
}

TEST_CASE("fixed-point command") {
  std::string out;
  CHECK(call({"fixed-point", "--trials", "200"}, &out) == 0);
  CHECK(out.find("fixed point: (2, 4)") != std::string::npos);
  CHECK(call({"fixed-point", "--alpha", "2,0", "--lambda", "0.5,0.5", "--start", "9,9",
              "--trials", "100"},
             &out) == 0);
  CHECK(out.find("fixed point: (4, ") != std::string::npos);
  CHECK(call({"fixed-point", "--lambda", "1.5,0.5"}) == 2);
}

TEST_CASE("fredholm command") {
  std::string out;
  CHECK(call({"fredholm", "solve", kData + "/constant02.json", "--json", "-"}, &out) == 0);
  const auto report = json::parse(out);
  CHECK(report["ok"] == true);
  CHECK(report["command"] == "fredholm");
  for (const auto& c : report["checks"]) {
    CAPTURE(c["name"].get<std::string>());
    CHECK(c["status"] == "pass");
  }
  const auto phi1 = report["results"]["direct"]["phi1"];
  REQUIRE(phi1.size() == 41);
  for (const auto& v : phi1) CHECK(v.get<double>() == doctest::Approx(5.0 / 3.0).epsilon(1e-9));

  CHECK(call({"fredholm", "solve", kData + "/manufactured.json"}) == 0);
  CHECK(call({"fredholm", "solve", kData + "/tabulated.json", "--method", "picard"}) == 0);
  CHECK(call({"fredholm", "solve", kData + "/constant03.json", "--json", "-"}, &out) == 1);
  const auto failed = json::parse(out);
  CHECK(failed["ok"] == false);
  CHECK(failed["checks"][0]["name"] == "condition");
  CHECK(failed["checks"][0]["status"] == "fail");
}

TEST_CASE("binary: deterministic check-axioms") {
  const auto a = spawn("check-axioms --space trace --trials 2000 --seed 42");
  const auto b = spawn("check-axioms --space trace --trials 2000 --seed 42");
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  REQUIRE(digest_line(a.out).size() == 16);
  CHECK(digest_line(a.out) == digest_line(b.out));
  const auto c = spawn("check-axioms --space trace --trials 2000 --seed 43");
  CHECK(c.code == 0);
  CHECK(digest_line(c.out) != digest_line(a.out));
}

TEST_CASE("binary: report files differ only in wall time") {
  const auto p1 = temp_file("r1.json");
  const auto p2 = temp_file("r2.json");
  CHECK(spawn("pm-demo --seed 7 --json " + p1.string()).code == 0);
  CHECK(spawn("pm-demo --seed 7 --json " + p2.string()).code == 0);
  const std::string t1 = slurp(p1.string());
  const std::string t2 = slurp(p2.string());
  auto r1 = json::parse(t1);
  auto r2 = json::parse(t2);
  CHECK(r1["digest"] == r2["digest"]);
  CHECK(t1 == r1.dump(2) + "\n");
  CHECK(t1.find("\n  \"checks\"") != std::string::npos);
  r1.erase("wall_time_ms");
  r2.erase("wall_time_ms");
  CHECK(r1.dump(2) == r2.dump(2));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("binary: exit codes") {
  CHECK(spawn("fixed-point").out.find("fixed point: (2, 4)") != std::string::npos);
  CHECK(spawn("fredholm solve \"" + kData + "/nope.json\"").code == 2);
  CHECK(spawn("fredholm solve \"" + kData + "/malformed.json\"").code == 2);
  CHECK(spawn("check-axioms --no-such-flag").code == 2);
  CHECK(spawn("hadzic --tnorm product").code == 1);
  CHECK(spawn("hadzic --tnorm min").code == 0);
  CHECK(spawn("--help").code == 0);
}
