#include "harness.hpp"

#include <algorithm>

#include "errors.hpp"

namespace parakl {

const char* quotient_mode_name(QuotientMode m) {
  return m == QuotientMode::All ? "all" : "maximal";
}

std::size_t ScanReport::counterexamples() const {
  std::size_t n = 0;
  for (const auto& m : modes) n += m.counterexamples;
  return n;
}

std::size_t ScanReport::control_failures() const {
  std::size_t n = 0;
  for (const auto& m : modes) n += m.control_failures.size();
  return n;
}

std::optional<IsoWitness> check_hypothesis_pair(const CoxeterSystem& sa, const Element& ua,
                                                const Element& va, GeneratorSubset Ja,
                                                const CoxeterSystem& sb, const Element& ub,
                                                const Element& vb, GeneratorSubset Jb,
                                                std::size_t max_size) {
  const IntervalPoset a = parabolic_interval(sa, ua, va, Ja);
  const IntervalPoset b = parabolic_interval(sb, ub, vb, Jb);
  return find_isomorphism(a, b, true, max_size);
}

Scanner::Scanner(ScanConfig cfg) : cfg_(std::move(cfg)) {
  for (const auto& sys : cfg_.systems) engines_.push_back(std::make_unique<KLEngine>(sys));
}

std::vector<ScanCase> Scanner::enumerate(QuotientMode mode,
                                         const std::vector<std::size_t>& active) {
  std::vector<ScanCase> out;
  for (std::size_t si : active) {
    const CoxeterSystem& sys = cfg_.systems[si];
    const std::size_t n = sys.rank();
    std::vector<GeneratorSubset> Js;
    if (mode == QuotientMode::All) {
      for (std::uint64_t b = 0; b < (1ULL << n); ++b) Js.emplace_back(b);
    } else {
      for (Gen s = 0; s < n; ++s) Js.push_back(GeneratorSubset::all(n).without(s));
    }
    const auto ball = sys.ball(cfg_.max_length);
    for (GeneratorSubset J : Js) {
      std::vector<Element> q;
      for (const auto& w : ball)
        if (sys.is_min_rep(w, J, Side::Right)) q.push_back(w);
      for (const auto& v : q)
        for (const auto& u : q) {
          if (u.length() >= v.length()) break;
          if (v.length() - u.length() > cfg_.max_rank) continue;
          if (!bruhat_leq(sys, u, v)) continue;
          out.push_back({si, J, u, v});
        }
    }
  }
  return out;
}

IntervalPoset Scanner::interval_of(const ScanCase& c) {
  IntervalOptions opts;
  opts.max_length = std::max<std::size_t>(opts.max_length, cfg_.max_length);
  return parabolic_interval(cfg_.systems[c.system], c.u, c.v, c.J, opts,
                            &engines_[c.system]->ideals());
}

std::vector<CaseValues> Scanner::values(const ScanCase& c) {
  std::vector<CaseValues> out;
  KLEngine& k = *engines_[c.system];
  for (KLType x : cfg_.types) out.push_back({PolyKind::P, x, k.parabolic_kl(c.u, c.v, c.J, x)});
  if (cfg_.r_polynomials)
    for (KLType x : cfg_.types) out.push_back({PolyKind::R, x, k.parabolic_r(c.u, c.v, c.J, x)});
  return out;
}

std::vector<CaseValues> Scanner::lifted_values(Extension& e, const Element& lu,
                                               const Element& lv) {
  std::vector<CaseValues> out;
  const GeneratorSubset S = e.ext.base_generators();
  for (KLType x : cfg_.types)
    out.push_back({PolyKind::P, x, e.engine->parabolic_kl(lu, lv, S, x)});
  if (cfg_.r_polynomials)
    for (KLType x : cfg_.types)
      out.push_back({PolyKind::R, x, e.engine->parabolic_r(lu, lv, S, x)});
  return out;
}

Scanner::Extension& Scanner::extension(std::size_t system, GeneratorSubset J) {
  const auto key = std::make_pair(system, J.bits());
  auto it = extensions_.find(key);
  if (it != extensions_.end()) return it->second;
  ExtendedSystem ext = extend_system(cfg_.systems[system], J, {}, cfg_.class_x);
  IntervalOptions opts;
  opts.max_length = std::max<std::size_t>(opts.max_length, cfg_.max_length + 1);
  auto engine = std::make_unique<KLEngine>(ext.extended, opts);
  return extensions_.emplace(key, Extension{std::move(ext), std::move(engine)})
      .first->second;
}

void Scanner::control(const ScanCase& c, const IntervalPoset& p, ModeReport& rep) {
  ++rep.controls_checked;
  Extension& e = extension(c.system, c.J);
  const Element lu = lift(e.ext, c.u);
  const Element lv = lift(e.ext, c.v);
  IntervalOptions opts;
  opts.max_length = std::max<std::size_t>(opts.max_length, cfg_.max_length + 1);
  const IntervalPoset lifted = parabolic_interval(e.ext.extended, lu, lv,
                                                  e.ext.base_generators(), opts,
                                                  &e.engine->ideals());
  if (!find_isomorphism(p, lifted, true, cfg_.max_interval_size)) {
    rep.control_failures.push_back({c, "lifted interval not detected as isomorphic"});
    return;
  }
  try {
    (void)lift_interval(e.ext, c.u, c.v, opts);
  } catch (const InternalError& err) {
    rep.control_failures.push_back({c, err.what()});
    return;
  }
  const auto a = values(c);
  const auto b = lifted_values(e, lu, lv);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i].value == b[i].value)) {
      rep.control_failures.push_back(
          {c, std::string(poly_kind_name(a[i].kind)) + " polynomial of type " +
                  kl_type_name(a[i].x) + " differs after lifting: " +
                  a[i].value.to_string() + " vs " + b[i].value.to_string()});
      return;
    }
  ++rep.controls_passed;
}

ScanReport Scanner::run() {
  ScanReport report;
  report.class_x = cfg_.class_x;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < cfg_.systems.size(); ++i) {
    const auto& sys = cfg_.systems[i];
    if (cfg_.class_x && !is_class_x(sys.matrix(), *cfg_.class_x)) {
      report.skipped_systems.push_back(sys.name());
      continue;
    }
    active.push_back(i);
    report.systems.push_back(sys.name());
  }

  struct ClassRep {
    ScanCase c;
    IntervalPoset poset;
    std::vector<CaseValues> vals;
  };

  for (QuotientMode mode : cfg_.modes) {
    ModeReport rep;
    rep.mode = mode;
    const auto cases = enumerate(mode, active);
    std::map<PosetFingerprint, std::vector<ClassRep>> buckets;

    for (const ScanCase& c : cases) {
      IntervalPoset p = interval_of(c);
      if (p.size() > cfg_.max_interval_size) {
        ++rep.skipped_oversize;
        continue;
      }
      ++rep.pairs_enumerated;
      auto vals = values(c);
      auto& bucket = buckets[fingerprint(p)];
      bool matched = false;
      for (const ClassRep& r : bucket) {
        auto w = find_isomorphism(p, r.poset, true, cfg_.max_interval_size);
        if (!w) continue;
        PARAKL_CHECK(verify_witness(*w));
        matched = true;
        ++rep.hypothesis_hits;
        ScanHit hit{c, r.c, vals, r.vals, w->map, true};
        for (std::size_t i = 0; i < vals.size(); ++i) {
          if (vals[i].value == r.vals[i].value)
            ++rep.equalities_verified;
          else
            hit.equal = false;
        }
        if (!hit.equal) ++rep.counterexamples;
        rep.hits.push_back(std::move(hit));
        break;
      }
      if (cfg_.positive_controls) control(c, p, rep);
      if (!matched) {
        bucket.push_back({c, std::move(p), std::move(vals)});
        ++rep.classes;
      }
    }
    report.modes.push_back(std::move(rep));
  }
  return report;
}

} // namespace parakl
