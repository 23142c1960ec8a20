// parakl command-line front end. Talks to the library only through the C API.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "parakl/parakl.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kDisagree = 1, kInput = 2, kPrecondition = 3, kInternal = 4 };

int exit_code(parakl_status st) {
  switch (st) {
    case PARAKL_OK: return kOk;
    case PARAKL_DISAGREEMENT: return kDisagree;
    case PARAKL_INPUT_ERROR: return kInput;
    case PARAKL_PRECONDITION:
    case PARAKL_LIMIT: return kPrecondition;
    default: return kInternal;
  }
}

struct Failure {
  int code;
};

// Throws Failure for hard errors; returns the status otherwise.
parakl_status check(parakl_status st) {
  if (st == PARAKL_OK || st == PARAKL_DISAGREEMENT) return st;
  std::cerr << "error: " << parakl_last_error() << "\n";
  throw Failure{exit_code(st)};
}

class Owned {
public:
  Owned() = default;
  ~Owned() { parakl_free_string(p_); }
  Owned(const Owned&) = delete;
  Owned& operator=(const Owned&) = delete;
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }
  Json json() const { return Json::parse(str()); }

private:
  char* p_ = nullptr;
};

class System {
public:
  explicit System(const std::string& path) { check(parakl_system_from_file(path.c_str(), &s_)); }
  ~System() { parakl_system_free(s_); }
  System(const System&) = delete;
  System& operator=(const System&) = delete;
  parakl_system* get() { return s_; }

private:
  parakl_system* s_ = nullptr;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    throw Failure{kInput};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    throw Failure{kInput};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Envelope {
  std::string command;
  Json inputs = Json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(const Json& result) const {
    Json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["result"] = result;
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    j["timing"] = {{"elapsed_us", us}};
    std::cout << j.dump(2) << "\n";
  }
};

struct CacheUse {
  std::string path;
  size_t loaded = 0;

  void load(parakl_system* s) {
    if (path.empty()) return;
    check(parakl_cache_load(s, path.c_str(), &loaded));
  }
  void store(parakl_system* s) {
    if (path.empty()) return;
    size_t written = 0;
    check(parakl_cache_store(s, path.c_str(), &written));
    std::cerr << "cache: loaded " << loaded << ", hits " << parakl_cache_hits(s)
              << ", stored " << written << "\n";
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic Kazhdan-Lusztig polynomials and Bruhat intervals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(parakl_version()));

  std::string system, u, v, quotient, type = "q", kind = "P", method = "recursion";
  std::string cache, dot, policy, class_x, out, config, word;
  std::size_t max_length = 4;

  auto add_system = [&](CLI::App* c) {
    c->add_option("--system", system, "SystemSpec JSON file")->required();
  };
  auto add_pair = [&](CLI::App* c) {
    c->add_option("--u", u, "lower element (generator names; \"\" is the identity)")
        ->required();
    c->add_option("--v", v, "upper element")->required();
    c->add_option("--quotient", quotient, "J as s1,s2 (default: empty)");
  };

  auto* poly = app.add_subcommand("poly", "parabolic KL or R-polynomial");
  add_system(poly);
  add_pair(poly);
  poly->add_option("--type", type, "q or -1")->check(CLI::IsMember({"q", "-1"}));
  poly->add_option("--kind", kind, "P or R")->check(CLI::IsMember({"P", "R"}));
  poly->add_option("--method", method, "recursion, duality or both")
      ->check(CLI::IsMember({"recursion", "duality", "both"}));
  poly->add_option("--cache", cache, "JSON-lines polynomial cache");

  auto* interval = app.add_subcommand("interval", "Bruhat interval [u,v] with [u,v]^J marked");
  add_system(interval);
  add_pair(interval);
  interval->add_option("--dot", dot, "write the Hasse diagram in DOT format");

  auto* element = app.add_subcommand("element", "canonical ShortLex form of a word");
  add_system(element);
  element->add_option("--word", word, "generator names")->required();

  auto* leq = app.add_subcommand("leq", "Bruhat comparison u <= v");
  add_system(leq);
  leq->add_option("--u", u)->required();
  leq->add_option("--v", v)->required();

  auto* sysinfo = app.add_subcommand("system", "normalized spec and fingerprint");
  add_system(sysinfo);

  auto* extend = app.add_subcommand("extend", "adjoin s~ for the quotient W^J");
  auto* verify = app.add_subcommand("verify-reduction",
                                    "compare P, R on W^J with the lifted maximal quotient");
  for (auto* c : {extend, verify}) {
    add_system(c);
    c->add_option("--quotient", quotient, "J as s1,s2")->required();
    c->add_option("--policy", policy, "bonds to s~ such as s1=3,s3=inf");
    c->add_option("--class-x", class_x, "allowed bond values such as 3,inf");
  }
  extend->add_option("--out", out, "write the extended SystemSpec to a file");
  verify->add_option("--max-length", max_length, "bound on l(v)");
  verify->add_option("--cache", cache, "JSON-lines polynomial cache");

  auto* scan = app.add_subcommand("scan", "combinatorial invariance scan");
  scan->add_option("--config", config, "ScanConfig JSON file")->required();
  scan->add_option("--out", out, "output prefix for PREFIX.json and PREFIX.csv")->required();
  scan->add_option("--cache", cache, "JSON-lines polynomial cache");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    Envelope env;
    CacheUse cu{cache};

    if (*poly) {
      env.command = "poly";
      env.inputs = {{"system", system}, {"u", u},       {"v", v},
                    {"quotient", quotient}, {"type", type}, {"kind", kind},
                    {"method", method}};
      System s(system);
      cu.load(s.get());
      Owned res;
      const auto st = check(parakl_poly(s.get(), u.c_str(), v.c_str(), quotient.c_str(),
                                        type.c_str(), kind.c_str(), method.c_str(), res.out()));
      cu.store(s.get());
      env.emit(res.json());
      if (st == PARAKL_DISAGREEMENT)
        std::cerr << "disagreement: recursion and duality differ\n";
      return exit_code(st);
    }

    if (*interval) {
      env.command = "interval";
      env.inputs = {{"system", system}, {"u", u}, {"v", v}, {"quotient", quotient}};
      if (!dot.empty()) env.inputs["dot"] = dot;
      System s(system);
      Owned res, d;
      check(parakl_interval(s.get(), u.c_str(), v.c_str(), quotient.c_str(), res.out(),
                            dot.empty() ? nullptr : d.out()));
      if (!dot.empty()) write_file(dot, d.str());
      env.emit(res.json());
      return kOk;
    }

    if (*element) {
      env.command = "element";
      env.inputs = {{"system", system}, {"word", word}};
      System s(system);
      Owned res;
      check(parakl_canonicalize(s.get(), word.c_str(), res.out()));
      env.emit(res.json());
      return kOk;
    }

    if (*leq) {
      env.command = "leq";
      env.inputs = {{"system", system}, {"u", u}, {"v", v}};
      System s(system);
      int r = 0;
      check(parakl_bruhat_leq(s.get(), u.c_str(), v.c_str(), &r));
      env.emit({{"leq", r != 0}});
      return kOk;
    }

    if (*sysinfo) {
      env.command = "system";
      env.inputs = {{"system", system}};
      System s(system);
      Owned spec, fp;
      check(parakl_system_to_json(s.get(), spec.out()));
      check(parakl_system_fingerprint(s.get(), fp.out()));
      env.emit({{"spec", spec.json()}, {"fingerprint", fp.str()}});
      return kOk;
    }

    if (*extend) {
      env.command = "extend";
      env.inputs = {{"system", system}, {"quotient", quotient}, {"policy", policy},
                    {"class_x", class_x}};
      System s(system);
      Owned res;
      check(parakl_extend(s.get(), quotient.c_str(), policy.c_str(),
                          class_x.empty() ? nullptr : class_x.c_str(), res.out()));
      Json r = res.json();
      if (!out.empty()) {
        write_file(out, r["extended"].dump(2) + "\n");
        env.inputs["out"] = out;
      }
      env.emit(r);
      return kOk;
    }

    if (*verify) {
      env.command = "verify-reduction";
      env.inputs = {{"system", system},   {"quotient", quotient},    {"policy", policy},
                    {"class_x", class_x}, {"max_length", max_length}};
      System s(system);
      cu.load(s.get());
      Owned res;
      const auto st = check(parakl_verify_reduction(
          s.get(), quotient.c_str(), policy.c_str(),
          class_x.empty() ? nullptr : class_x.c_str(), max_length, res.out()));
      cu.store(s.get());
      env.emit(res.json());
      if (st == PARAKL_DISAGREEMENT) std::cerr << "reduction identity failed on some pair\n";
      return exit_code(st);
    }

    if (*scan) {
      env.command = "scan";
      env.inputs = {{"config", config}, {"out", out}};
      const std::string text = read_file(config);
      const std::string base = fs::absolute(config).parent_path().string();
      Owned report, csv;
      size_t hits = 0;
      const auto st = check(parakl_scan(text.c_str(), base.c_str(),
                                        cache.empty() ? nullptr : cache.c_str(), report.out(),
                                        csv.out(), &hits));
      const std::string rpath = out + ".json", cpath = out + ".csv";
      write_file(rpath, report.str());
      write_file(cpath, csv.str());
      if (!cache.empty()) std::cerr << "cache: hits " << hits << "\n";
      const Json rep = report.json();
      Json result;
      result["report"] = rpath;
      result["csv"] = cpath;
      result["summary"] = rep["summary"];
      Json modes = Json::array();
      for (const auto& m : rep["modes"]) {
        Json mm = m;
        mm.erase("counterexample_details");
        mm.erase("control_failures");
        modes.push_back(std::move(mm));
      }
      result["modes"] = std::move(modes);
      env.emit(result);
      if (st == PARAKL_DISAGREEMENT) {
        std::cerr << "counterexample or failed control found; reproduction data:\n";
        for (const auto& m : rep["modes"]) {
          for (const auto& c : m["counterexample_details"]) std::cerr << c.dump(2) << "\n";
          for (const auto& c : m["control_failures"]) std::cerr << c.dump(2) << "\n";
        }
      }
      return exit_code(st);
    }
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInput;
}
