// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "extension.hpp"
#include "harness.hpp"
#include "support.hpp"

using namespace parakl;
using namespace testsupport;

namespace {

struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first_failure = what();
  }
};

struct Sweep {
  const char* file;
  std::size_t radius;
};

const std::vector<Sweep> kSweep{
    {"a3.json", 20}, {"b3.json", 20}, {"a1xa1.json", 20}, {"at2.json", 8}};

template <class F> void for_each_sweep_pair(F&& f) {
  for (const auto& s : kSweep) {
    const auto sys = load(s.file);
    const auto ball = sys.ball(s.radius);
    KLEngine k(sys);
    for (GeneratorSubset J : all_subsets(sys)) {
      const auto Q = quotient(sys, ball, J);
      for (const auto& v : Q)
        for (const auto& u : Q) {
          if (u.length() > v.length() || !bruhat_leq(sys, u, v)) continue;
          f(sys, k, J, u, v);
        }
    }
  }
}

std::string pair_text(const CoxeterSystem& sys, GeneratorSubset J, const Element& u,
                      const Element& v) {
  return sys.name() + " J={" + sys.format_subset(J) + "} u=" + sys.display(u) +
         " v=" + sys.display(v);
}

// 1. recursion == duality on the sweep
Tally oracle_equivalence() {
  Tally t;
  for_each_sweep_pair([&](const CoxeterSystem& sys, KLEngine& k, GeneratorSubset J,
                          const Element& u, const Element& v) {
    for (KLType x : {KLType::Q, KLType::MinusOne}) {
      const auto a = k.parabolic_kl(u, v, J, x);
      const auto b = k.parabolic_kl_duality(u, v, J, x);
      t.expect(a == b, [&] {
        return pair_text(sys, J, u, v) + " x=" + kl_type_name(x) + ": " + a.to_string() +
               " vs " + b.to_string();
      });
    }
  });
  return t;
}

// 2. J = {} degenerates
Tally degeneration() {
  Tally t;
  for_each_sweep_pair([&](const CoxeterSystem& sys, KLEngine& k, GeneratorSubset J,
                          const Element& u, const Element& v) {
    if (!J.empty()) return;
    const auto what = [&] { return pair_text(sys, J, u, v); };
    const auto pq = k.parabolic_kl(u, v, J, KLType::Q);
    const auto pm = k.parabolic_kl(u, v, J, KLType::MinusOne);
    const auto rq = k.parabolic_r(u, v, J, KLType::Q);
    const auto rm = k.parabolic_r(u, v, J, KLType::MinusOne);
    t.expect(pq == pm, what);
    t.expect(rq == rm, what);
    const auto d = static_cast<std::int64_t>(v.length() - u.length());
    t.expect(!rq.is_zero() && rq.degree() == d && rq.coefficient(d) == 1, what);
    t.expect(pq.coefficient(0) == 1, what);
  });
  return t;
}

// 3. R inversion identity
Tally r_inversion() {
  Tally t;
  for_each_sweep_pair([&](const CoxeterSystem& sys, KLEngine& k, GeneratorSubset J,
                          const Element& u, const Element& v) {
    for (KLType x : {KLType::Q, KLType::MinusOne}) {
      const auto s = r_inversion_sum(k, u, v, J, x);
      t.expect(s == (u == v ? LaurentPoly::constant(1) : LaurentPoly()), [&] {
        return pair_text(sys, J, u, v) + " x=" + kl_type_name(x) + ": " + s.to_string();
      });
    }
  });
  return t;
}

// 4. reduction to the maximal quotient
Tally reduction() {
  Tally t;
  {
    const auto a2 = load("a2.json");
    const auto ext = extend_system(a2, subset(a2, "s2"));
    t.expect(ext.extended.ball(20).size() == 24, [] { return "extension of A2 is not A3"; });
    KLEngine base(a2), lifted(ext.extended);
    const auto rep = verify_reduction_all(ext, base, lifted, 3);
    t.expect(rep.all_equal() && rep.pairs == 6, [&] {
      return "A2 reduction: " + std::to_string(rep.unequal) + " unequal records";
    });
    const Element e = a2.identity(), v = el(a2, "s2 s1");
    const auto J = subset(a2, "s2");
    t.expect(base.parabolic_kl_duality(e, v, J, KLType::MinusOne).is_zero(),
             [] { return "P^{J,-1}_{e,s2s1} != 0"; });
    t.expect(base.parabolic_kl_duality(e, v, J, KLType::Q) == LaurentPoly::constant(1),
             [] { return "P^{J,q}_{e,s2s1} != 1"; });
    t.expect(lifted.parabolic_kl_duality(lift(ext, e), lift(ext, v), ext.base_generators(),
                                         KLType::MinusOne)
                 .is_zero(),
             [] { return "lifted P^{S,-1} != 0"; });
  }
  {
    const auto a3 = load("a3.json");
    const auto ext = extend_system(a3, subset(a3, "s2"));
    t.expect(ext.extended.matrix() == load("at3.json").matrix(),
             [] { return "extension of A3 over {s2} is not affine A3"; });
    KLEngine base(a3), lifted(ext.extended);
    const auto rep = verify_reduction_all(ext, base, lifted, 6);
    t.expect(rep.all_equal(), [&] {
      for (const auto& r : rep.records)
        if (!r.equal)
          return "A3 reduction fails at u=" + a3.display(r.u) + " v=" + a3.display(r.v);
      return std::string("A3 reduction fails");
    });
    t.checks += rep.records.size();
  }
  return t;
}

// 5. f(z) = z s~ on W^J
Tally proof_maps() {
  Tally t;
  struct Case {
    const char* file;
    const char* J;
  };
  for (const Case c : {Case{"a2.json", "s2"}, Case{"a3.json", "s2"}}) {
    const auto sys = load(c.file);
    const auto J = subset(sys, c.J);
    const auto ext = extend_system(sys, J);
    const auto S = ext.base_generators();
    const auto QJ = quotient(sys, sys.ball(8), J);
    std::vector<Element> lifted;
    for (const auto& z : QJ) {
      const Element l = lift(ext, z);
      lifted.push_back(l);
      t.expect(ext.extended.is_min_rep(l, S, Side::Right),
               [&] { return "lift of " + sys.display(z) + " not in the maximal quotient"; });
      const Element back = ext.extended.multiply(l, ext.stilde, Side::Right);
      bool in_w = true;
      for (Gen g : back.word()) in_w = in_w && g != ext.stilde;
      t.expect(in_w, [&] { return "lift of " + sys.display(z) + " not in W s~"; });
    }
    for (std::size_t i = 0; i < QJ.size(); ++i)
      for (std::size_t j = 0; j < QJ.size(); ++j)
        t.expect(bruhat_leq(sys, QJ[i], QJ[j]) ==
                     bruhat_leq(ext.extended, lifted[i], lifted[j]),
                 [&] { return "order not preserved at " + sys.display(QJ[i]) + ", " +
                              sys.display(QJ[j]); });
    // surjectivity onto W~^S cap W s~ within the corresponding ball
    std::set<Word> images;
    for (const auto& l : lifted) images.insert(l.word());
    for (const auto& y : ext.extended.ball(9)) {
      if (!ext.extended.is_min_rep(y, S, Side::Right)) continue;
      const Element back = ext.extended.multiply(y, ext.stilde, Side::Right);
      bool in_w = true;
      for (Gen g : back.word()) in_w = in_w && g != ext.stilde;
      if (!in_w) continue;
      t.expect(images.count(y.word()) == 1,
               [&] { return ext.extended.display(y) + " is not a lift"; });
    }
    // [us~, vs~]^S = { z s~ : z in [u,v]^J }
    for (const auto& v : QJ)
      for (const auto& u : QJ) {
        if (!bruhat_leq(sys, u, v)) continue;
        const auto li = lift_interval(ext, u, v);
        std::set<Word> marked, expect;
        for (std::size_t i = 0; i < li.lifted.size(); ++i)
          if (li.lifted.marked[i]) marked.insert(li.lifted.ground[i].word());
        const auto src = parabolic_interval(sys, u, v, J);
        for (std::size_t i = 0; i < src.size(); ++i)
          if (src.marked[i]) expect.insert(lift(ext, src.ground[i]).word());
        t.expect(marked == expect, [&] { return pair_text(sys, J, u, v) + ": lifted set differs"; });
      }
  }
  return t;
}

// 6. Bruhat cross-checks
Tally bruhat_checks() {
  Tally t;
  for (const char* f : {"a3.json", "b3.json"}) {
    const auto sys = load(f);
    const auto ball = sys.ball(20);
    SubwordTable oracle(sys);
    for (const auto& v : ball)
      for (const auto& u : ball) {
        const bool le = bruhat_leq(sys, u, v);
        t.expect(deodhar_criterion(sys, u, v) == le, [&] {
          return std::string(f) + " Deodhar criterion disagrees at " + sys.display(u) + ", " +
                 sys.display(v);
        });
        if (!le) continue;
        const auto p = interval(sys, u, v);
        for (const auto& a : p.ground)
          for (const auto& b : p.ground)
            t.expect(bruhat_leq(sys, a, b) == oracle.leq(a, b), [&] {
              return std::string(f) + " subword oracle disagrees at " + sys.display(a) + ", " +
                     sys.display(b);
            });
      }
  }
  const auto at2 = load("at2.json");
  const auto ball = at2.ball(8);
  std::mt19937 rng(2024);
  SubwordTable oracle(at2);
  for (int i = 0; i < 10000; ++i) {
    const auto& u = ball[rng() % ball.size()];
    const auto& v = ball[rng() % ball.size()];
    const bool le = bruhat_leq(at2, u, v);
    t.expect(deodhar_criterion(at2, u, v) == le, [&] {
      return "affine A2 Deodhar criterion disagrees at " + at2.display(u) + ", " +
             at2.display(v);
    });
    if (i % 50 == 0 && le && v.length() <= 6) {
      const auto p = interval(at2, u, v);
      for (const auto& a : p.ground)
        for (const auto& b : p.ground)
          t.expect(bruhat_leq(at2, a, b) == oracle.leq(a, b),
                   [&] { return "affine A2 subword oracle disagrees"; });
    }
  }
  return t;
}

ScanConfig acceptance_config() {
  std::ifstream in(config_path("acceptance-scan.json"));
  return scan_config_from_json(Json::parse(in), PARAKL_CONFIG_DIR);
}

// 7. invariance scan
Tally scan(std::string& detail) {
  Tally t;
  const ScanConfig cfg = acceptance_config();
  Scanner scanner(cfg);
  const auto rep = scanner.run();
  std::ostringstream os;
  for (const auto& m : rep.modes) {
    os << quotient_mode_name(m.mode) << ": " << m.pairs_enumerated << " pairs, " << m.classes
       << " classes, " << m.hypothesis_hits << " hits, " << m.counterexamples
       << " counterexamples, controls " << m.controls_passed << "/" << m.controls_checked
       << "; ";
    t.expect(m.controls_checked == m.pairs_enumerated && m.skipped_oversize == 0,
             [] { return "not every pair was controlled"; });
    t.expect(m.controls_passed == m.controls_checked,
             [&] { return m.control_failures.front().reason; });
    t.expect(m.counterexamples == 0, [] { return "counterexample found"; });
  }
  t.expect(rep.modes.size() == 2, [] { return "expected both quotient modes"; });
  t.expect(rep.systems.size() == 2, [] { return "expected A3 and B3"; });
  detail = os.str();
  return t;
}

// 8. structural suites
Tally structural() {
  Tally t;
  for (const auto& s : kSweep) {
    const auto sys = load(s.file);
    for (const auto& w : sys.ball(s.radius)) {
      const auto [again, reduced] = sys.canonicalize(w.word());
      t.expect(again == w && reduced, [&] { return "canonicalization not idempotent"; });
    }
  }
  for (const char* f : {"a3.json", "b3.json"}) {
    const auto sys = load(f);
    const auto ball = sys.ball(20);
    for (GeneratorSubset J : all_subsets(sys))
      for (const auto& w : quotient(sys, ball, J))
        for (Gen s = 0; s < sys.rank(); ++s) {
          const Element sw = sys.multiply(w, s, Side::Left);
          const bool down = sw.length() < w.length();
          const bool up_in = !down && sys.is_min_rep(sw, J, Side::Right);
          const bool up_out = !down && !up_in;
          t.expect(int(down) + int(up_in) + int(up_out) == 1, [] { return "trichotomy"; });
          if (down) t.expect(sys.is_min_rep(sw, J, Side::Right), [] { return "sw < w left W^J"; });
          if (up_out) {
            // sw = w t with t in J
            const Element t_el = sys.product(sys.inverse(w), sw);
            t.expect(t_el.length() == 1 && J.contains(t_el.word()[0]),
                     [&] { return std::string(f) + " third case is not w t with t in J"; });
          }
        }
  }
  t.expect(load("a2.json").ball(30).size() == 6, [] { return "|A2| != 6"; });
  t.expect(load("a3.json").ball(30).size() == 24, [] { return "|A3| != 24"; });
  t.expect(load("b3.json").ball(30).size() == 48, [] { return "|B3| != 48"; });

  const ScanConfig cfg = acceptance_config();
  Scanner s1(cfg), s2(cfg);
  const auto r1 = s1.run();
  const auto r2 = s2.run();
  t.expect(scan_report_to_json(cfg, r1).dump(2) == scan_report_to_json(cfg, r2).dump(2),
           [] { return "scan report JSON differs between runs"; });
  t.expect(scan_report_to_csv(cfg, r1) == scan_report_to_csv(cfg, r2),
           [] { return "scan report CSV differs between runs"; });
  return t;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Tally(std::string&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "recursion equals duality solver", [](std::string&) { return oracle_equivalence(); }},
      {2, "degeneration at J = {}", [](std::string&) { return degeneration(); }},
      {3, "R-polynomial inversion identity", [](std::string&) { return r_inversion(); }},
      {4, "maximal-quotient reduction", [](std::string&) { return reduction(); }},
      {5, "lift map and lifted intervals", [](std::string&) { return proof_maps(); }},
      {6, "Bruhat cross-checks", [](std::string&) { return bruhat_checks(); }},
      {7, "combinatorial invariance scan", [](std::string& d) { return scan(d); }},
      {8, "structural suites and determinism", [](std::string&) { return structural(); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    Tally t;
    try {
      t = c.run(detail);
    } catch (const std::exception& e) {
      t.failures = 1;
      t.first_failure = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = t.failures == 0;
    failed += !ok;
    std::printf("criterion %d %s: %s (%zu checks, %.2fs)%s%s\n", c.id, ok ? "PASS" : "FAIL",
                c.name, t.checks, secs, ok ? "" : " first failure: ",
                ok ? "" : t.first_failure.c_str());
    if (!detail.empty()) std::printf("  %s\n", detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
