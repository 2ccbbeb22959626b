#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "../tools/cli.hpp"

namespace fs = std::filesystem;
namespace cli = actorcap::cli;

namespace {

struct Call {
  int code;
  std::string out;
  std::string err;
};

Call invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& rel) { return std::string(ACTORCAP_CORPUS_DIR) + "/" + rel; }

std::vector<fs::path> files(const std::string& dir) {
  std::vector<fs::path> v;
  for (const auto& e : fs::directory_iterator(corpus(dir)))
    if (e.path().extension() == ".acap")
      v.push_back(e.path());
  std::sort(v.begin(), v.end());
  return v;
}

void all_lines_json(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  for (std::string line; std::getline(in, line); ++n) {
    INFO(line);
    CHECK(nlohmann::json::accept(line));
  }
  CHECK(n > 0);
}

}  // namespace

TEST_CASE("check exit codes") {
  for (const auto& f : files("positive")) {
    INFO(f);
    Call c = invoke({"check", f.string()});
    CHECK(c.code == cli::kOk);
    CHECK(c.out.rfind("ok: Beh[", 0) == 0);
  }
  for (const auto& f : files("negative")) {
    INFO(f);
    Call c = invoke({"check", f.string()});
    CHECK(c.code == cli::kTypeError);
    CHECK(c.out.empty());
    CHECK(!c.err.empty());
  }

  fs::path bad = fs::temp_directory_path() / "actorcap_cli_malformed.acap";
  std::ofstream(bad) << "messages a;\nroot = beh {";
  CHECK(invoke({"check", bad.string()}).code == cli::kParseError);
  fs::remove(bad);
  CHECK(invoke({"check", "/nonexistent/x.acap"}).code == cli::kParseError);
  CHECK(invoke({"frobnicate"}).code == cli::kParseError);
  CHECK(invoke({}).code == cli::kParseError);
}

TEST_CASE("check json") {
  Call ok = invoke({"check", corpus("positive/counter.acap"), "--format", "json"});
  REQUIRE(ok.code == 0);
  auto j = nlohmann::json::parse(ok.out);
  CHECK(j["status"] == "ok");
  CHECK(j.contains("behaviour"));
  CHECK(j.contains("effect"));

  Call bad = invoke({"check", corpus("negative/double_send.acap"), "--format", "json"});
  REQUIRE(bad.code == cli::kTypeError);
  j = nlohmann::json::parse(bad.out);
  CHECK(j["status"] == "type-error");
  CHECK(j["code"] == "EmptyResidual");
  CHECK(j["line"].get<int>() > 0);
}

TEST_CASE("run is deterministic per seed") {
  for (const auto& f : files("positive")) {
    INFO(f);
    for (std::string seed : {"0", "7", "123456789"}) {
      Call a = invoke({"run", f.string(), "--seed", seed, "--format", "json"});
      Call b = invoke({"run", f.string(), "--seed", seed, "--format", "json"});
      CHECK(a.code == cli::kOk);
      CHECK(a.out == b.out);
      all_lines_json(a.out);
    }
  }
}

TEST_CASE("run text format ends with outcome") {
  Call c = invoke({"run", corpus("positive/counter.acap"), "--max-deliveries", "5"});
  REQUIRE(c.code == cli::kOk);
  CHECK(c.out.find("outcome: ") != std::string::npos);
}

TEST_CASE("run refuses ill-typed programs unless unchecked") {
  std::string f = corpus("negative/double_send.acap");
  Call refused = invoke({"run", f});
  CHECK(refused.code == cli::kTypeError);
  CHECK(refused.out.empty());
  CHECK(refused.err.find("--unchecked") != std::string::npos);

  Call forced = invoke({"run", f, "--unchecked", "--format", "json"});
  CHECK(forced.code == cli::kStuck);
  all_lines_json(forced.out);
  CHECK(forced.out.find("\"violation\"") != std::string::npos);

  Call quiet = invoke({"run", f, "--unchecked", "--no-monitor", "--format", "json"});
  CHECK(quiet.code == cli::kStuck);
  CHECK(quiet.out.find("\"violation\"") == std::string::npos);

  Call strict = invoke({"run", f, "--unchecked", "--monitor-strict"});
  CHECK(strict.code == cli::kViolation);
  CHECK(strict.out.find("outcome: violation") != std::string::npos);
}

TEST_CASE("run writes the trace to --out") {
  fs::path p = fs::temp_directory_path() / "actorcap_cli_trace.jsonl";
  std::string f = corpus("positive/ping_pong.acap");
  Call to_file = invoke({"run", f, "--seed", "3", "--format", "json", "--out", p.string()});
  Call to_out = invoke({"run", f, "--seed", "3", "--format", "json"});
  REQUIRE(to_file.code == 0);
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == to_out.out);
  fs::remove(p);
}

TEST_CASE("explore the corpus") {
  for (const auto& f : files("positive")) {
    INFO(f);
    Call c = invoke({"explore", f.string(), "--depth", "6"});
    CHECK(c.code == cli::kOk);
    Call j = invoke({"explore", f.string(), "--depth", "6", "--format", "json"});
    CHECK(j.code == cli::kOk);
    all_lines_json(j.out);
  }
  CHECK(invoke({"explore", corpus("negative/double_send.acap")}).code == cli::kTypeError);
  Call forced = invoke({"explore", corpus("negative/double_send.acap"), "--unchecked"});
  CHECK((forced.code == cli::kStuck || forced.code == cli::kViolation));
}

TEST_CASE("alg") {
  Call c = invoke({"alg", "includes", "<a>", "<a> | <b>"});
  CHECK(c.code == 0);
  CHECK(c.out == "true\n");
  c = invoke({"alg", "includes", "<a> | <b>", "<a>"});
  CHECK(c.code == 1);
  CHECK(c.out == "false\n");
  c = invoke({"alg", "equiv", "<a> # <b>", "<a>.<b> | <b>.<a>"});
  CHECK(c.code == 0);
  c = invoke({"alg", "derivative", "a", "<a>.<b>"});
  CHECK(c.code == 0);
  CHECK(c.out == "<b>\n");
  c = invoke({"alg", "enumerate", "<a> # <b>", "2"});
  CHECK(c.out == "ab ba\n");
  c = invoke({"alg", "shuffle", "<a>", "<b>", "--format", "json"});
  CHECK(c.code == 0);
  all_lines_json(c.out);
  c = invoke({"alg", "enumerate", "<a>*", "2", "--format", "json"});
  auto j = nlohmann::json::parse(c.out);
  CHECK(j["words"] == nlohmann::json::array({"eps", "a", "aa"}));

  CHECK(invoke({"alg", "derivative", "c", "<a>", "--alphabet", "a,b"}).code == cli::kParseError);
  CHECK(invoke({"alg", "includes", "<a"}).code == cli::kParseError);
  CHECK(invoke({"alg", "includes", "<a", "<b>"}).code == cli::kParseError);
}
