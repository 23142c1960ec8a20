#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "errors.hpp"

namespace parakl {

namespace fs = std::filesystem;

namespace {

void check_format(const Json& j, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + " must be a JSON object");
  if (j.contains("format") && j["format"] != kFormatVersion)
    throw InputError(std::string(what) + ": unsupported format version");
}

template <class T> T get_field(const Json& j, const char* key, const char* what) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string(what) + ": missing or invalid field '" + key + "'");
  }
}

Json bond_to_json(Bond b) {
  if (b == kInfinity) return "inf";
  return b;
}

Bond bond_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfinity;
    throw InputError("matrix entries must be integers or \"inf\"");
  }
  if (!j.is_number_integer()) throw InputError("matrix entries must be integers or \"inf\"");
  const auto v = j.get<std::int64_t>();
  if (v < 1 || v > 1'000'000) throw InputError("matrix entry out of range");
  return static_cast<Bond>(v);
}

std::string canonical_spec_string(const CoxeterSystem& sys) {
  std::string s = "format=1;generators=";
  for (const auto& n : sys.generator_names()) s += n + ",";
  s += ";matrix=";
  for (Bond b : sys.matrix().entries()) s += format_bond(b) + ",";
  s += ";backend=";
  s += backend_name(sys.backend());
  return s;
}

const char* kind_token(PolyKind k) { return poly_kind_name(k); }

PolyKind kind_from(const std::string& s) {
  if (s == "P") return PolyKind::P;
  if (s == "R") return PolyKind::R;
  throw InputError("unknown polynomial kind '" + s + "'");
}

KLType type_from(const std::string& s) {
  if (s == "q") return KLType::Q;
  if (s == "-1") return KLType::MinusOne;
  throw InputError("unknown KL type '" + s + "' (expected q or -1)");
}

Json case_to_json(const ScanConfig& cfg, const ScanCase& c) {
  const auto& sys = cfg.systems[c.system];
  Json j;
  j["system"] = sys.name();
  j["quotient"] = sys.format_subset(c.J);
  j["u"] = sys.format(c.u);
  j["v"] = sys.format(c.v);
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

} // namespace

// ---------------------------------------------------------------------------
// SystemSpec

CoxeterSystem system_from_json(const Json& spec) {
  check_format(spec, "system spec");
  for (const auto& [key, _] : spec.items())
    if (key != "format" && key != "name" && key != "generators" && key != "matrix" &&
        key != "backend")
      throw InputError("system spec: unknown field '" + key + "'");
  const auto names = get_field<std::vector<std::string>>(spec, "generators", "system spec");
  const Json& rows = spec.contains("matrix") ? spec["matrix"] : Json();
  if (!rows.is_array()) throw InputError("system spec: 'matrix' must be an array of rows");
  const std::size_t n = rows.size();
  std::vector<Bond> entries;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n)
      throw InputError("system spec: matrix must be square");
    for (const auto& e : row) entries.push_back(bond_from_json(e));
  }
  std::optional<Backend> backend;
  if (spec.contains("backend")) {
    backend = parse_backend(get_field<std::string>(spec, "backend", "system spec"));
    if (!backend) throw InputError("system spec: unknown backend");
  }
  std::string name = spec.contains("name") ? get_field<std::string>(spec, "name", "system spec")
                                           : std::string();
  return CoxeterSystem::create(CoxeterMatrix(n, std::move(entries)), names, backend,
                               std::move(name));
}

Json system_to_json(const CoxeterSystem& sys) {
  Json j;
  j["format"] = kFormatVersion;
  j["name"] = sys.name();
  j["generators"] = sys.generator_names();
  Json rows = Json::array();
  const std::size_t n = sys.rank();
  for (std::size_t s = 0; s < n; ++s) {
    Json row = Json::array();
    for (std::size_t t = 0; t < n; ++t) row.push_back(bond_to_json(sys.matrix()(s, t)));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  j["backend"] = backend_name(sys.backend());
  return j;
}

std::string system_fingerprint(const CoxeterSystem& sys) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_spec_string(sys)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Polynomials and intervals

Json poly_to_json(const LaurentPoly& p) {
  Json j;
  j["offset"] = p.offset();
  j["coeffs"] = p.coeffs();
  j["display"] = p.to_string();
  return j;
}

LaurentPoly poly_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("polynomial must be an object");
  const auto offset = get_field<std::int64_t>(j, "offset", "polynomial");
  const auto coeffs = get_field<std::vector<std::int64_t>>(j, "coeffs", "polynomial");
  LaurentPoly p(offset, coeffs);
  if (!coeffs.empty() && (coeffs.front() == 0 || coeffs.back() == 0))
    throw InputError("polynomial coefficients are not normalized");
  if (coeffs.empty() && offset != 0) throw InputError("zero polynomial must have offset 0");
  return p;
}

Json interval_to_json(const CoxeterSystem& sys, const IntervalPoset& p) {
  Json j;
  j["format"] = kFormatVersion;
  j["bottom"] = sys.format(p.ground.at(p.bottom));
  j["top"] = sys.format(p.ground.at(p.top));
  j["size"] = p.size();
  j["marked_count"] = p.marked_count();
  Json elems = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    Json e;
    e["index"] = i;
    e["word"] = sys.format(p.ground[i]);
    e["rank"] = p.rank[i];
    e["marked"] = static_cast<bool>(p.marked[i]);
    elems.push_back(std::move(e));
  }
  j["elements"] = std::move(elems);
  Json covers = Json::array();
  for (auto [a, b] : p.covers) covers.push_back(Json::array({a, b}));
  j["covers"] = std::move(covers);
  return j;
}

std::string interval_to_dot(const CoxeterSystem& sys, const IntervalPoset& p) {
  std::ostringstream os;
  os << "digraph interval {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << "  n" << i << " [label=\"" << sys.display(p.ground[i]) << "\"";
    if (p.marked[i]) os << ", style=filled, fillcolor=lightblue, peripheries=2";
    os << "];\n";
  }
  for (auto [a, b] : p.covers) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Extension and reduction

Json extension_to_json(const ExtendedSystem& ext) {
  Json j;
  j["format"] = kFormatVersion;
  j["base"] = ext.base.name();
  j["quotient"] = ext.base.format_subset(ext.J);
  j["stilde"] = ext.extended.generator_names().at(ext.stilde);
  Json pol = Json::object();
  for (const auto& [s, b] : ext.policy) pol[ext.base.generator_names()[s]] = bond_to_json(b);
  j["policy"] = std::move(pol);
  j["extended"] = system_to_json(ext.extended);
  return j;
}

Json reduction_to_json(const ExtendedSystem& ext, const ReductionReport& rep) {
  Json j;
  j["format"] = kFormatVersion;
  j["base"] = ext.base.name();
  j["extended"] = ext.extended.name();
  j["quotient"] = ext.base.format_subset(ext.J);
  j["stilde"] = ext.extended.generator_names().at(ext.stilde);
  j["pairs"] = rep.pairs;
  j["records_equal"] = rep.equal;
  j["records_unequal"] = rep.unequal;
  j["all_equal"] = rep.all_equal();
  Json recs = Json::array();
  for (const auto& r : rep.records) {
    Json e;
    e["u"] = ext.base.format(r.u);
    e["v"] = ext.base.format(r.v);
    e["lifted_u"] = ext.extended.format(lift(ext, r.u));
    e["lifted_v"] = ext.extended.format(lift(ext, r.v));
    e["kind"] = kind_token(r.kind);
    e["type"] = kl_type_name(r.x);
    e["lhs"] = poly_to_json(r.lhs);
    e["rhs"] = poly_to_json(r.rhs);
    e["paths_agree"] = r.paths_agree;
    e["equal"] = r.equal;
    recs.push_back(std::move(e));
  }
  j["records"] = std::move(recs);
  return j;
}

// ---------------------------------------------------------------------------
// Scan config and report

ScanConfig scan_config_from_json(const Json& j, const fs::path& base_dir) {
  check_format(j, "scan config");
  static const std::set<std::string> known{
      "format",   "systems", "quotients",     "max_length",      "max_rank",
      "max_interval_size", "types", "r_polynomials", "class_x", "positive_controls"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw InputError("scan config: unknown field '" + key + "'");

  ScanConfig cfg;
  if (!j.contains("systems") || !j["systems"].is_array())
    throw InputError("scan config: 'systems' must be an array");
  for (const auto& s : j["systems"]) {
    if (s.is_object() && s.contains("path") && s.size() == 1) {
      fs::path p = s["path"].get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      std::ifstream in(p);
      if (!in) throw InputError("scan config: cannot read system file " + p.string());
      Json spec;
      try {
        spec = Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw InputError("scan config: " + p.string() + ": " + e.what());
      }
      cfg.systems.push_back(system_from_json(spec));
    } else {
      cfg.systems.push_back(system_from_json(s));
    }
  }
  if (j.contains("quotients")) {
    cfg.modes.clear();
    Json q = j["quotients"];
    if (q.is_string()) q = Json::array({q});
    if (!q.is_array() || q.empty()) throw InputError("scan config: bad 'quotients'");
    for (const auto& m : q) {
      const auto s = m.is_string() ? m.get<std::string>() : std::string();
      if (s == "all")
        cfg.modes.push_back(QuotientMode::All);
      else if (s == "maximal")
        cfg.modes.push_back(QuotientMode::Maximal);
      else
        throw InputError("scan config: quotient mode must be \"all\" or \"maximal\"");
    }
  }
  if (j.contains("max_length"))
    cfg.max_length = get_field<std::size_t>(j, "max_length", "scan config");
  if (j.contains("max_rank")) cfg.max_rank = get_field<std::size_t>(j, "max_rank", "scan config");
  if (j.contains("max_interval_size"))
    cfg.max_interval_size = get_field<std::size_t>(j, "max_interval_size", "scan config");
  if (j.contains("types")) {
    cfg.types.clear();
    for (const auto& t : get_field<std::vector<std::string>>(j, "types", "scan config"))
      cfg.types.push_back(type_from(t));
    if (cfg.types.empty()) throw InputError("scan config: 'types' must be nonempty");
  }
  if (j.contains("r_polynomials"))
    cfg.r_polynomials = get_field<bool>(j, "r_polynomials", "scan config");
  if (j.contains("positive_controls"))
    cfg.positive_controls = get_field<bool>(j, "positive_controls", "scan config");
  if (j.contains("class_x") && !j["class_x"].is_null()) {
    const Json& x = j["class_x"];
    if (x.is_string()) {
      cfg.class_x = ClassX::parse(x.get<std::string>());
    } else if (x.is_array()) {
      std::set<Bond> vals;
      for (const auto& b : x) vals.insert(bond_from_json(b));
      cfg.class_x = ClassX(std::move(vals));
    } else {
      throw InputError("scan config: 'class_x' must be a string or an array");
    }
  }
  if (cfg.max_interval_size > 64)
    throw InputError("scan config: max_interval_size cannot exceed 64");
  return cfg;
}

Json scan_report_to_json(const ScanConfig& cfg, const ScanReport& rep) {
  Json j;
  j["format"] = kFormatVersion;
  j["systems"] = rep.systems;
  j["skipped_systems"] = rep.skipped_systems;
  j["class_x"] = rep.class_x ? Json(rep.class_x->to_string()) : Json(nullptr);
  Json c;
  c["max_length"] = cfg.max_length;
  c["max_rank"] = cfg.max_rank;
  c["max_interval_size"] = cfg.max_interval_size;
  Json types = Json::array();
  for (auto t : cfg.types) types.push_back(kl_type_name(t));
  c["types"] = std::move(types);
  c["r_polynomials"] = cfg.r_polynomials;
  c["positive_controls"] = cfg.positive_controls;
  Json quotients = Json::array();
  for (auto m : cfg.modes) quotients.push_back(quotient_mode_name(m));
  c["quotients"] = std::move(quotients);
  j["config"] = std::move(c);

  Json modes = Json::array();
  for (const auto& m : rep.modes) {
    Json mj;
    mj["mode"] = quotient_mode_name(m.mode);
    mj["pairs_enumerated"] = m.pairs_enumerated;
    mj["skipped_oversize"] = m.skipped_oversize;
    mj["classes"] = m.classes;
    mj["hypothesis_hits"] = m.hypothesis_hits;
    mj["equalities_verified"] = m.equalities_verified;
    mj["counterexamples"] = m.counterexamples;
    mj["controls_checked"] = m.controls_checked;
    mj["controls_passed"] = m.controls_passed;
    Json cex = Json::array();
    for (const auto& h : m.hits) {
      if (h.equal) continue;
      Json e;
      e["a"] = case_to_json(cfg, h.a);
      e["b"] = case_to_json(cfg, h.b);
      Json vals = Json::array();
      for (std::size_t i = 0; i < h.values_a.size(); ++i) {
        Json v;
        v["kind"] = kind_token(h.values_a[i].kind);
        v["type"] = kl_type_name(h.values_a[i].x);
        v["a"] = poly_to_json(h.values_a[i].value);
        v["b"] = poly_to_json(h.values_b[i].value);
        vals.push_back(std::move(v));
      }
      e["values"] = std::move(vals);
      e["isomorphism"] = h.map;
      cex.push_back(std::move(e));
    }
    mj["counterexample_details"] = std::move(cex);
    Json fails = Json::array();
    for (const auto& f : m.control_failures) {
      Json e;
      e["case"] = case_to_json(cfg, f.base);
      e["reason"] = f.reason;
      fails.push_back(std::move(e));
    }
    mj["control_failures"] = std::move(fails);
    modes.push_back(std::move(mj));
  }
  j["modes"] = std::move(modes);
  Json s;
  s["counterexamples"] = rep.counterexamples();
  s["control_failures"] = rep.control_failures();
  s["clean"] = rep.clean();
  j["summary"] = std::move(s);
  return j;
}

std::string scan_report_to_csv(const ScanConfig& cfg, const ScanReport& rep) {
  std::ostringstream os;
  os << "mode,system_a,quotient_a,u_a,v_a,system_b,quotient_b,u_b,v_b,kind,type,poly_a,"
        "poly_b,equal\n";
  for (const auto& m : rep.modes)
    for (const auto& h : m.hits) {
      const auto& sa = cfg.systems[h.a.system];
      const auto& sb = cfg.systems[h.b.system];
      for (std::size_t i = 0; i < h.values_a.size(); ++i) {
        const bool eq = h.values_a[i].value == h.values_b[i].value;
        os << quotient_mode_name(m.mode) << ',' << csv_field(sa.name()) << ','
           << csv_field(sa.format_subset(h.a.J)) << ',' << csv_field(sa.format(h.a.u)) << ','
           << csv_field(sa.format(h.a.v)) << ',' << csv_field(sb.name()) << ','
           << csv_field(sb.format_subset(h.b.J)) << ',' << csv_field(sb.format(h.b.u)) << ','
           << csv_field(sb.format(h.b.v)) << ',' << kind_token(h.values_a[i].kind) << ','
           << kl_type_name(h.values_a[i].x) << ','
           << csv_field(h.values_a[i].value.to_string()) << ','
           << csv_field(h.values_b[i].value.to_string()) << ',' << (eq ? "true" : "false")
           << '\n';
      }
    }
  return os.str();
}

// ---------------------------------------------------------------------------
// Cache

CacheLoadStats load_cache(KLEngine& engine, const fs::path& path, const WarningSink& warn) {
  CacheLoadStats stats;
  std::ifstream in(path);
  if (!in) {
    if (fs::exists(path)) warn("cannot read cache " + path.string() + "; continuing uncached");
    return stats;
  }
  const CoxeterSystem& sys = engine.system();
  const std::string fp = system_fingerprint(sys);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      if (!j.is_object() || j.value("format", 0) != kFormatVersion)
        throw InputError("bad format field");
      if (get_field<std::string>(j, "fingerprint", "cache line") != fp) {
        ++stats.mismatched;
        continue;
      }
      PolyKey key;
      key.kind = kind_from(get_field<std::string>(j, "kind", "cache line"));
      key.x = type_from(get_field<std::string>(j, "x", "cache line"));
      const GeneratorSubset J =
          sys.parse_subset(get_field<std::string>(j, "J", "cache line"));
      const Word uw = sys.parse_word(get_field<std::string>(j, "u", "cache line"));
      const Word vw = sys.parse_word(get_field<std::string>(j, "v", "cache line"));
      const Element u = sys.element(uw);
      const Element v = sys.element(vw);
      if (u.word() != uw || v.word() != vw) throw InputError("non-canonical word");
      if (!sys.is_min_rep(u, J, Side::Right) || !sys.is_min_rep(v, J, Side::Right) ||
          u == v || !bruhat_leq(sys, u, v))
        throw InputError("key outside the table domain");
      const LaurentPoly p = poly_from_json(j.at("poly"));
      if (!p.is_zero() && p.offset() < 0) throw InputError("negative exponent");
      key.u = uw;
      key.v = vw;
      key.J = J.bits();
      engine.table().insert(key, p, true);
      ++stats.loaded;
    } catch (const std::exception& e) {
      ++stats.skipped;
      warn(path.string() + ":" + std::to_string(lineno) + ": skipping cache line (" +
           e.what() + ")");
    }
  }
  return stats;
}

std::size_t store_cache(KLEngine& engine, const fs::path& path, const WarningSink& warn) {
  const CoxeterSystem& sys = engine.system();
  const std::string fp = system_fingerprint(sys);
  std::string out;
  std::size_t written = 0;
  for (const auto& row : engine.table().rows()) {
    if (row.from_cache) continue;
    Json j;
    j["format"] = kFormatVersion;
    j["fingerprint"] = fp;
    j["kind"] = kind_token(row.key.kind);
    j["x"] = kl_type_name(row.key.x);
    j["J"] = sys.format_subset(GeneratorSubset(row.key.J));
    j["u"] = sys.format_word(row.key.u);
    j["v"] = sys.format_word(row.key.v);
    Json p;
    p["offset"] = row.value.offset();
    p["coeffs"] = row.value.coeffs();
    j["poly"] = std::move(p);
    out += j.dump() + "\n";
    ++written;
  }
  if (written == 0) return 0;

  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) {
    warn("cannot open cache " + path.string() + " for writing");
    return 0;
  }
  ::flock(fd, LOCK_EX);
  // A previous writer may have died mid-line; start on a fresh line.
  if (::lseek(fd, 0, SEEK_END) > 0) {
    char last = '\n';
    const int rfd = ::open(path.c_str(), O_RDONLY);
    if (rfd >= 0) {
      const off_t end = ::lseek(rfd, -1, SEEK_END);
      if (end >= 0 && ::read(rfd, &last, 1) != 1) last = '\n';
      ::close(rfd);
    }
    if (last != '\n') out.insert(out.begin(), '\n');
  }
  std::size_t off = 0;
  while (off < out.size()) {
    const ssize_t n = ::write(fd, out.data() + off, out.size() - off);
    if (n <= 0) {
      warn("short write to cache " + path.string());
      break;
    }
    off += static_cast<std::size_t>(n);
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
  engine.table().mark_persisted();
  return written;
}

} // namespace parakl
