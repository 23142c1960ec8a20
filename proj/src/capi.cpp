#include "parakl/parakl.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <new>
#include <string>

#include "errors.hpp"
#include "io.hpp"

using namespace parakl;

struct parakl_system {
  CoxeterSystem sys;
  std::unique_ptr<KLEngine> engine;
};

namespace {

thread_local std::string g_last_error;

std::mutex g_warn_mu;
parakl_warning_fn g_warn_fn = nullptr;
void* g_warn_user = nullptr;

void warn(const std::string& msg) {
  std::lock_guard lock(g_warn_mu);
  if (g_warn_fn)
    g_warn_fn(msg.c_str(), g_warn_user);
  else
    std::fprintf(stderr, "warning: %s\n", msg.c_str());
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

template <class F> parakl_status guard(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const InputError& e) {
    g_last_error = e.what();
    return PARAKL_INPUT_ERROR;
  } catch (const PreconditionError& e) {
    g_last_error = e.what();
    return PARAKL_PRECONDITION;
  } catch (const LimitError& e) {
    g_last_error = e.what();
    return PARAKL_LIMIT;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("malformed JSON: ") + e.what();
    return PARAKL_INPUT_ERROR;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PARAKL_LIMIT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PARAKL_INTERNAL;
  }
}

parakl_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return PARAKL_INPUT_ERROR;
}

std::string str(const char* s) { return s ? std::string(s) : std::string(); }

Element parse_element(const CoxeterSystem& sys, const char* word) {
  return sys.element(sys.parse_word(str(word)));
}

KLType parse_type(const char* s) {
  const std::string t = s ? s : "q";
  if (t == "q") return KLType::Q;
  if (t == "-1") return KLType::MinusOne;
  throw InputError("unknown KL type '" + t + "' (expected q or -1)");
}

PolyKind parse_kind(const char* s) {
  const std::string t = s ? s : "P";
  if (t == "P") return PolyKind::P;
  if (t == "R") return PolyKind::R;
  throw InputError("unknown polynomial kind '" + t + "' (expected P or R)");
}

Method parse_method(const char* s) {
  const std::string t = s ? s : "recursion";
  if (t == "recursion") return Method::Recursion;
  if (t == "duality") return Method::Duality;
  if (t == "both") return Method::Both;
  throw InputError("unknown method '" + t + "' (expected recursion, duality or both)");
}

Json subset_names(const CoxeterSystem& sys, GeneratorSubset J) {
  Json a = Json::array();
  for (Gen s : J.members()) a.push_back(sys.generator_names()[s]);
  return a;
}

ExtendedSystem make_extension(const CoxeterSystem& sys, const char* quotient,
                              const char* policy, const char* class_x) {
  const GeneratorSubset J = sys.parse_subset(str(quotient));
  const ExtensionPolicy pol = parse_policy(sys, str(policy));
  std::optional<ClassX> X;
  if (class_x && *class_x) X = ClassX::parse(class_x);
  return extend_system(sys, J, pol, X);
}

} // namespace

extern "C" {

const char* parakl_version(void) { return "1.0.0"; }

const char* parakl_last_error(void) { return g_last_error.c_str(); }

void parakl_free_string(char* s) { std::free(s); }

void parakl_set_warning_handler(parakl_warning_fn fn, void* user) {
  std::lock_guard lock(g_warn_mu);
  g_warn_fn = fn;
  g_warn_user = user;
}

parakl_status parakl_system_from_json(const char* json, parakl_system** out) {
  if (!json || !out) return null_arg("json/out");
  return guard([&] {
    CoxeterSystem sys = system_from_json(Json::parse(json));
    auto engine = std::make_unique<KLEngine>(sys);
    *out = new parakl_system{std::move(sys), std::move(engine)};
    return PARAKL_OK;
  });
}

parakl_status parakl_system_from_file(const char* path, parakl_system** out) {
  if (!path || !out) return null_arg("path/out");
  return guard([&] {
    std::ifstream in(path);
    if (!in) throw InputError(std::string("cannot read system file ") + path);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string(path) + ": " + e.what());
    }
    CoxeterSystem sys = system_from_json(j);
    auto engine = std::make_unique<KLEngine>(sys);
    *out = new parakl_system{std::move(sys), std::move(engine)};
    return PARAKL_OK;
  });
}

void parakl_system_free(parakl_system* sys) { delete sys; }

parakl_status parakl_system_to_json(const parakl_system* sys, char** out) {
  if (!sys || !out) return null_arg("sys/out");
  return guard([&] {
    *out = dup(dump(system_to_json(sys->sys)));
    return PARAKL_OK;
  });
}

parakl_status parakl_system_fingerprint(const parakl_system* sys, char** out) {
  if (!sys || !out) return null_arg("sys/out");
  return guard([&] {
    *out = dup(system_fingerprint(sys->sys));
    return PARAKL_OK;
  });
}

size_t parakl_system_rank(const parakl_system* sys) { return sys ? sys->sys.rank() : 0; }

parakl_status parakl_canonicalize(const parakl_system* sys, const char* word, char** out) {
  if (!sys || !out) return null_arg("sys/out");
  return guard([&] {
    const CoxeterSystem& s = sys->sys;
    auto [w, reduced] = s.canonicalize(s.parse_word(str(word)));
    Json j;
    j["word"] = s.format(w);
    j["display"] = s.display(w);
    j["length"] = w.length();
    j["reduced"] = reduced;
    j["left_descents"] = subset_names(s, w.descents(Side::Left));
    j["right_descents"] = subset_names(s, w.descents(Side::Right));
    *out = dup(dump(j));
    return PARAKL_OK;
  });
}

parakl_status parakl_bruhat_leq(const parakl_system* sys, const char* u, const char* v,
                                int* out) {
  if (!sys || !out) return null_arg("sys/out");
  return guard([&] {
    *out = bruhat_leq(sys->sys, parse_element(sys->sys, u), parse_element(sys->sys, v));
    return PARAKL_OK;
  });
}

parakl_status parakl_poly(parakl_system* sys, const char* u, const char* v,
                          const char* quotient, const char* type, const char* kind,
                          const char* method, char** out) {
  if (!sys || !out) return null_arg("sys/out");
  return guard([&] {
    const CoxeterSystem& s = sys->sys;
    const Element eu = parse_element(s, u);
    const Element ev = parse_element(s, v);
    const GeneratorSubset J = s.parse_subset(str(quotient));
    const KLType x = parse_type(type);
    const PolyKind k = parse_kind(kind);
    const Method m = parse_method(method);
    Json j;
    j["u"] = s.format(eu);
    j["v"] = s.format(ev);
    j["quotient"] = s.format_subset(J);
    j["type"] = kl_type_name(x);
    j["kind"] = poly_kind_name(k);
    parakl_status st = PARAKL_OK;
    if (m == Method::Both) {
      const LaurentPoly a = sys->engine->compute(eu, ev, J, x, k, Method::Recursion);
      const LaurentPoly b = sys->engine->compute(eu, ev, J, x, k, Method::Duality);
      j["method"] = "both";
      j["recursion"] = poly_to_json(a);
      j["duality"] = poly_to_json(b);
      j["agree"] = a == b;
      if (!(a == b)) st = PARAKL_DISAGREEMENT;
    } else {
      j["method"] = m == Method::Recursion ? "recursion" : "duality";
      j["poly"] = poly_to_json(sys->engine->compute(eu, ev, J, x, k, m));
    }
    *out = dup(dump(j));
    return st;
  });
}

parakl_status parakl_interval(parakl_system* sys, const char* u, const char* v,
                              const char* quotient, char** json, char** dot) {
  if (!sys || !json) return null_arg("sys/json");
  return guard([&] {
    const CoxeterSystem& s = sys->sys;
    const Element eu = parse_element(s, u);
    const Element ev = parse_element(s, v);
    const GeneratorSubset J = s.parse_subset(str(quotient));
    const IntervalPoset p = parabolic_interval(s, eu, ev, J, sys->engine->options(),
                                               &sys->engine->ideals());
    Json j = interval_to_json(s, p);
    j["quotient"] = s.format_subset(J);
    std::string d = dot ? interval_to_dot(s, p) : std::string();
    *json = dup(dump(j));
    if (dot) *dot = dup(d);
    return PARAKL_OK;
  });
}

parakl_status parakl_extend(const parakl_system* sys, const char* quotient,
                            const char* policy, const char* class_x, char** out) {
  if (!sys || !out) return null_arg("sys/out");
  return guard([&] {
    const ExtendedSystem ext = make_extension(sys->sys, quotient, policy, class_x);
    *out = dup(dump(extension_to_json(ext)));
    return PARAKL_OK;
  });
}

parakl_status parakl_verify_reduction(parakl_system* sys, const char* quotient,
                                      const char* policy, const char* class_x,
                                      size_t max_length, char** out) {
  if (!sys || !out) return null_arg("sys/out");
  return guard([&] {
    const ExtendedSystem ext = make_extension(sys->sys, quotient, policy, class_x);
    IntervalOptions opts = sys->engine->options();
    opts.max_length = std::max(opts.max_length, max_length + 1);
    KLEngine extended(ext.extended, opts);
    const ReductionReport rep = verify_reduction_all(ext, *sys->engine, extended, max_length);
    Json j = reduction_to_json(ext, rep);
    j["max_length"] = max_length;
    *out = dup(dump(j));
    return rep.all_equal() ? PARAKL_OK : PARAKL_DISAGREEMENT;
  });
}

parakl_status parakl_scan(const char* config_json, const char* base_dir,
                          const char* cache_path, char** report_json, char** csv,
                          size_t* cache_hits) {
  if (!config_json || !report_json) return null_arg("config_json/report_json");
  return guard([&] {
    const Json cj = Json::parse(config_json);
    ScanConfig cfg = scan_config_from_json(cj, base_dir ? base_dir : ".");
    Scanner scanner(std::move(cfg));
    if (cache_path)
      for (std::size_t i = 0; i < scanner.system_count(); ++i)
        load_cache(scanner.engine(i), cache_path, warn);
    const ScanReport rep = scanner.run();
    if (cache_path)
      for (std::size_t i = 0; i < scanner.system_count(); ++i)
        store_cache(scanner.engine(i), cache_path, warn);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < scanner.system_count(); ++i)
      hits += scanner.engine(i).table().cache_hits();
    std::string r = dump(scan_report_to_json(scanner.config(), rep));
    std::string c = csv ? scan_report_to_csv(scanner.config(), rep) : std::string();
    *report_json = dup(r);
    if (csv) *csv = dup(c);
    if (cache_hits) *cache_hits = hits;
    return rep.clean() ? PARAKL_OK : PARAKL_DISAGREEMENT;
  });
}

parakl_status parakl_cache_load(parakl_system* sys, const char* path, size_t* loaded) {
  if (!sys || !path) return null_arg("sys/path");
  return guard([&] {
    const CacheLoadStats st = load_cache(*sys->engine, path, warn);
    if (loaded) *loaded = st.loaded;
    return PARAKL_OK;
  });
}

parakl_status parakl_cache_store(parakl_system* sys, const char* path, size_t* written) {
  if (!sys || !path) return null_arg("sys/path");
  return guard([&] {
    const std::size_t n = store_cache(*sys->engine, path, warn);
    if (written) *written = n;
    return PARAKL_OK;
  });
}

size_t parakl_cache_hits(const parakl_system* sys) {
  return sys ? sys->engine->table().cache_hits() : 0;
}

} // extern "C"
