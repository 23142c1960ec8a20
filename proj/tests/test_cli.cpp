// Integration tests against the shared library's C interface and the CLI.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <set>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include "parakl/parakl.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

const std::string kCli = PARAKL_CLI_PATH;
const std::string kConfigs = PARAKL_CONFIG_DIR;

fs::path workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "parakl-cli-test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string cfg(const std::string& f) { return kConfigs + "/" + f; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

std::string quote(const std::string& s) {
  std::string r = "'";
  for (char c : s) {
    if (c == '\'')
      r += "'\\''";
    else
      r += c;
  }
  return r + "'";
}

Run run(const std::vector<std::string>& args) {
  std::string cmd = quote(kCli);
  for (const auto& a : args) cmd += " " + quote(a);
  const fs::path out = workdir() / "stdout.txt";
  const fs::path err = workdir() / "stderr.txt";
  cmd += " >" + quote(out.string()) + " 2>" + quote(err.string());
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::size_t hits_in(const std::string& err) {
  std::smatch m;
  if (std::regex_search(err, m, std::regex("hits ([0-9]+)"))) return std::stoul(m[1]);
  return 0;
}

struct Owned {
  char* p = nullptr;
  ~Owned() { parakl_free_string(p); }
  Json json() const { return Json::parse(p); }
};

} // namespace

TEST_CASE("C API basics") {
  parakl_system* sys = nullptr;
  REQUIRE(parakl_system_from_file(cfg("a2.json").c_str(), &sys) == PARAKL_OK);
  CHECK(parakl_system_rank(sys) == 2);

  Owned c;
  REQUIRE(parakl_canonicalize(sys, "s2 s1 s2", &c.p) == PARAKL_OK);
  CHECK(c.json()["word"] == "s1 s2 s1");
  CHECK(c.json()["reduced"] == true);

  int leq = -1;
  CHECK(parakl_bruhat_leq(sys, "s1", "s2 s1", &leq) == PARAKL_OK);
  CHECK(leq == 1);
  CHECK(parakl_bruhat_leq(sys, "s1", "s2", &leq) == PARAKL_OK);
  CHECK(leq == 0);
  CHECK(parakl_bruhat_leq(sys, "s7", "s2", &leq) == PARAKL_INPUT_ERROR);
  CHECK(std::string(parakl_last_error()).find("s7") != std::string::npos);

  Owned p;
  CHECK(parakl_poly(sys, "", "s2 s1", "s2", "-1", "P", "both", &p.p) == PARAKL_OK);
  CHECK(p.json()["agree"] == true);
  CHECK(p.json()["recursion"]["coeffs"].empty());
  Owned bad;
  CHECK(parakl_poly(sys, "s2", "s2 s1", "s2", "q", "P", nullptr, &bad.p) ==
        PARAKL_PRECONDITION);
  CHECK(parakl_poly(sys, "", "s1", "", "x", "P", nullptr, &bad.p) == PARAKL_INPUT_ERROR);

  parakl_system* none = nullptr;
  CHECK(parakl_system_from_json("{\"generators\":[\"a\",\"b\"],\"matrix\":[[1,2],[3,1]]}",
                                &none) == PARAKL_INPUT_ERROR);
  CHECK(parakl_system_from_json("{", &none) == PARAKL_INPUT_ERROR);
  CHECK(none == nullptr);
  parakl_system_free(sys);
}

TEST_CASE("C API warning handler") {
  std::vector<std::string> seen;
  parakl_set_warning_handler(
      [](const char* m, void* u) { static_cast<std::vector<std::string>*>(u)->push_back(m); },
      &seen);
  parakl_system* sys = nullptr;
  REQUIRE(parakl_system_from_file(cfg("a2.json").c_str(), &sys) == PARAKL_OK);
  const fs::path c = workdir() / "warn.jsonl";
  { std::ofstream(c) << "garbage\n"; }
  size_t loaded = 99;
  CHECK(parakl_cache_load(sys, c.string().c_str(), &loaded) == PARAKL_OK);
  CHECK(loaded == 0);
  CHECK(seen.size() == 1);
  parakl_set_warning_handler(nullptr, nullptr);
  parakl_system_free(sys);
}

TEST_CASE("poly command") {
  auto r = run({"poly", "--system", cfg("a2.json"), "--quotient", "s2", "--u", "", "--v",
                "s2 s1", "--type", "-1"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["command"] == "poly");
  CHECK(j["result"]["poly"]["coeffs"].empty());
  std::vector<std::string> keys;
  for (auto& [k, _] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"command", "inputs", "result", "timing"});
  CHECK(Json::parse(j.dump(2)).dump(2) + "\n" == r.out);

  r = run({"poly", "--system", cfg("a2.json"), "--u", "", "--v", "s1"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["result"]["poly"]["display"] == "1");

  r = run({"poly", "--system", cfg("a3.json"), "--u", "s2", "--v", "s2 s1 s3 s2", "--method",
           "both"});
  CHECK(r.code == 0);
  CHECK(r.json()["result"]["agree"] == true);
  CHECK(r.json()["result"]["recursion"]["display"] == "1 + q");

  r = run({"poly", "--system", cfg("a2.json"), "--u", "", "--v", "s1 s2", "--kind", "R"});
  CHECK(r.json()["result"]["poly"]["display"] == "1 - 2q + q^2");
}

TEST_CASE("poly --method both agrees on the full A3 sweep") {
  parakl_system* sys = nullptr;
  REQUIRE(parakl_system_from_file(cfg("a3.json").c_str(), &sys) == PARAKL_OK);
  std::vector<std::string> words;
  {
    // all 24 elements via canonicalized products
    std::vector<std::string> frontier{""};
    std::set<std::string> seen{""};
    while (!frontier.empty()) {
      std::vector<std::string> next;
      for (const auto& w : frontier)
        for (const char* s : {"s1", "s2", "s3"}) {
          Owned c;
          REQUIRE(parakl_canonicalize(sys, (w + " " + s).c_str(), &c.p) == PARAKL_OK);
          const std::string nw = c.json()["word"];
          if (seen.insert(nw).second) next.push_back(nw);
        }
      frontier = std::move(next);
    }
    words.assign(seen.begin(), seen.end());
  }
  CHECK(words.size() == 24);
  std::size_t checked = 0;
  for (const char* J : {"", "s1", "s2", "s3", "s1,s2", "s1,s3", "s2,s3", "s1,s2,s3"})
    for (const auto& u : words)
      for (const auto& v : words)
        for (const char* x : {"q", "-1"}) {
          Owned p;
          const auto st = parakl_poly(sys, u.c_str(), v.c_str(), J, x, "P", "both", &p.p);
          if (st == PARAKL_PRECONDITION) continue; // endpoints outside W^J
          REQUIRE(st == PARAKL_OK);
          CHECK(p.json()["agree"] == true);
          ++checked;
        }
  CHECK(checked > 800);
  parakl_system_free(sys);
}

TEST_CASE("exit codes") {
  CHECK(run({"poly", "--system", cfg("a2.json"), "--u", "s9", "--v", "s1"}).code == 2);
  CHECK(run({"poly", "--system", cfg("a2.json"), "--u", "s2", "--v", "s2 s1", "--quotient",
             "s2"})
            .code == 3);
  CHECK(run({"poly", "--system", "/nonexistent.json", "--u", "", "--v", "s1"}).code == 2);
  CHECK(run({"poly", "--system", cfg("a2.json"), "--u", "", "--v", "s1", "--type", "z"}).code ==
        2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"interval", "--system", cfg("a2.json"), "--u", "s1", "--v", "s2"}).code == 3);
  const fs::path bad = workdir() / "bad.json";
  { std::ofstream(bad) << R"({"generators":["a","b"],"matrix":[[1,2],[3,1]]})"; }
  CHECK(run({"poly", "--system", bad.string(), "--u", "", "--v", ""}).code == 2);
}

TEST_CASE("interval command") {
  const fs::path dot = workdir() / "i.dot";
  auto r = run({"interval", "--system", cfg("a2.json"), "--u", "", "--v", "s1 s2", "--dot",
                dot.string()});
  REQUIRE(r.code == 0);
  const Json res = r.json()["result"];
  CHECK(res["size"] == 4);
  CHECK(res["covers"].size() == 4);
  const std::string d = slurp(dot);
  std::size_t edges = 0;
  for (auto p = d.find("->"); p != std::string::npos; p = d.find("->", p + 1)) ++edges;
  CHECK(edges == 4);

  r = run({"interval", "--system", cfg("a2.json"), "--u", "s1", "--v", "s1"});
  CHECK(r.json()["result"]["size"] == 1);
  CHECK(r.json()["result"]["covers"].empty());
}

TEST_CASE("element, leq and system commands") {
  auto r = run({"element", "--system", cfg("at2.json"), "--word", "s1 s2 s3 s1"});
  CHECK(r.json()["result"]["length"] == 4);
  r = run({"leq", "--system", cfg("a2.json"), "--u", "s1 s2", "--v", "s2 s1"});
  CHECK(r.json()["result"]["leq"] == false);
  r = run({"system", "--system", cfg("a3.json")});
  CHECK(r.json()["result"]["fingerprint"].get<std::string>().size() == 16);
}

TEST_CASE("extend command") {
  const fs::path out = workdir() / "at3.json";
  auto r = run({"extend", "--system", cfg("a3.json"), "--quotient", "s2", "--out",
                out.string()});
  REQUIRE(r.code == 0);
  const Json emitted = Json::parse(slurp(out));
  const Json expect = Json::parse(slurp(cfg("at3.json")));
  CHECK(emitted["matrix"] == expect["matrix"]);
  // the emitted spec can be read back verbatim
  parakl_system* sys = nullptr;
  REQUIRE(parakl_system_from_file(out.string().c_str(), &sys) == PARAKL_OK);
  Owned again;
  REQUIRE(parakl_system_to_json(sys, &again.p) == PARAKL_OK);
  CHECK(std::string(again.p) == slurp(out));
  parakl_system_free(sys);

  r = run({"extend", "--system", cfg("a2.json"), "--quotient", "s1,s2"});
  const Json m = r.json()["result"]["extended"]["matrix"];
  CHECK(m[2][0] == 2);
  CHECK(m[2][1] == 2);

  CHECK(run({"extend", "--system", cfg("a3.json"), "--quotient", "s2", "--policy", "s1=3",
             "--class-x", "inf"})
            .code == 2);
  CHECK(run({"extend", "--system", cfg("a3.json"), "--quotient", "s2", "--policy", "s2=3"})
            .code == 2);
}

TEST_CASE("verify-reduction command") {
  auto r = run({"verify-reduction", "--system", cfg("a2.json"), "--quotient", "s2",
                "--max-length", "3"});
  REQUIRE(r.code == 0);
  const Json res = r.json()["result"];
  CHECK(res["all_equal"] == true);
  bool found = false;
  for (const auto& rec : res["records"])
    if (rec["u"] == "" && rec["v"] == "s2 s1" && rec["kind"] == "P") {
      found = true;
      CHECK(rec["lhs"]["display"] == (rec["type"] == "q" ? "1" : "0"));
      CHECK(rec["lhs"] == rec["rhs"]);
    }
  CHECK(found);
}

TEST_CASE("scan command") {
  const fs::path prefix = workdir() / "a3max";
  auto r = run({"scan", "--config", cfg("a3-maximal.json"), "--out", prefix.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(prefix.string() + ".json"));
  CHECK(fs::exists(prefix.string() + ".csv"));
  const std::string first = slurp(prefix.string() + ".json");
  r = run({"scan", "--config", cfg("a3-maximal.json"), "--out", prefix.string()});
  CHECK(slurp(prefix.string() + ".json") == first);

  const fs::path empty = workdir() / "empty.json";
  { std::ofstream(empty) << R"({"format":1,"systems":[]})"; }
  r = run({"scan", "--config", empty.string(), "--out", (workdir() / "empty").string()});
  CHECK(r.code == 0);
  CHECK(r.json()["result"]["summary"]["clean"] == true);

  const fs::path broken = workdir() / "broken.json";
  { std::ofstream(broken) << R"({"format":1,"systems":[],"max_rank":"x"})"; }
  CHECK(run({"scan", "--config", broken.string(), "--out", (workdir() / "b").string()}).code ==
        2);
}

TEST_CASE("cache reuse, fingerprint isolation and truncated lines") {
  const fs::path cache = workdir() / "poly.jsonl";
  const std::vector<std::string> args{"poly", "--system", cfg("a3.json"), "--u", "s2", "--v",
                                      "s2 s1 s3 s2", "--cache", cache.string()};
  auto r1 = run(args);
  auto r2 = run(args);
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  CHECK(r1.json()["result"] == r2.json()["result"]);
  CHECK(hits_in(r2.err) >= 1);

  auto rb = run({"poly", "--system", cfg("b3.json"), "--u", "s2", "--v", "s2 s1 s3 s2",
                 "--cache", cache.string()});
  CHECK(rb.code == 0);
  CHECK(hits_in(rb.err) == 0);

  { std::ofstream(cache, std::ios::app) << R"({"format":1,"fingerprint":"12)"; }
  auto r3 = run(args);
  CHECK(r3.code == 0);
  CHECK(r3.err.find("skipping") != std::string::npos);
  CHECK(r3.json()["result"] == r1.json()["result"]);

  auto r4 = run({"poly", "--system", cfg("a3.json"), "--u", "", "--v", "s1", "--cache",
                 (workdir() / "no/such/dir/c.jsonl").string()});
  CHECK(r4.code == 0);
  CHECK(r4.err.find("warning") != std::string::npos);
}

TEST_CASE("corrupted cache entry is reported as a counterexample") {
  const fs::path cache = workdir() / "scan.jsonl";
  const fs::path prefix = workdir() / "inj";
  auto r = run({"scan", "--config", cfg("a3-maximal.json"), "--out", prefix.string(),
                "--cache", cache.string()});
  REQUIRE(r.code == 0);
  // P^{J,q}_{e,s3} with J = {s1,s2} is 1; plant a 2
  std::string text = slurp(cache);
  const std::string needle =
      R"("kind":"P","x":"q","J":"s1,s2","u":"","v":"s3","poly":{"offset":0,"coeffs":[1]})";
  const auto pos = text.find(needle);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, needle.size(),
               R"("kind":"P","x":"q","J":"s1,s2","u":"","v":"s3","poly":{"offset":0,"coeffs":[2]})");
  { std::ofstream(cache, std::ios::trunc) << text; }
  r = run({"scan", "--config", cfg("a3-maximal.json"), "--out", prefix.string(), "--cache",
           cache.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("\"v\": \"s3\"") != std::string::npos);
  const Json rep = Json::parse(slurp(prefix.string() + ".json"));
  CHECK(rep["summary"]["counterexamples"].get<int>() >= 1);

  // the poly command with --method both exposes the same corruption
  auto p = run({"poly", "--system", cfg("a3.json"), "--quotient", "s1,s2", "--u", "", "--v",
                "s3", "--method", "both", "--cache", cache.string()});
  CHECK(p.code == 1);
  CHECK(p.json()["result"]["agree"] == false);
}
