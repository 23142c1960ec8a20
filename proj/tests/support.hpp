#pragma once

// Shared fixtures and independent oracles for the test programs. Nothing here
// calls the library's Bruhat or KL algorithms; the oracles only rely on word
// canonicalization, which has its own permutation-representation oracle.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <bit>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bruhat.hpp"
#include "coxeter.hpp"
#include "io.hpp"
#include "klpoly.hpp"
#include "laurent.hpp"

namespace testsupport {

using namespace parakl;

inline std::string config_path(const std::string& file) {
  return std::string(PARAKL_CONFIG_DIR) + "/" + file;
}

inline CoxeterSystem load(const std::string& file) {
  std::ifstream in(config_path(file));
  return system_from_json(Json::parse(in));
}

inline CoxeterSystem make(std::size_t n, std::vector<Bond> entries,
                          std::optional<Backend> backend = std::nullopt,
                          SystemOptions opts = {}) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i + 1));
  return CoxeterSystem::create(CoxeterMatrix(n, std::move(entries)), names, backend, "", opts);
}

inline Element el(const CoxeterSystem& sys, const std::string& w) {
  return sys.element(sys.parse_word(w));
}

inline GeneratorSubset subset(const CoxeterSystem& sys, const std::string& J) {
  return sys.parse_subset(J);
}

inline std::vector<GeneratorSubset> all_subsets(const CoxeterSystem& sys) {
  std::vector<GeneratorSubset> out;
  for (std::uint64_t b = 0; b < (1ULL << sys.rank()); ++b) out.emplace_back(b);
  return out;
}

inline std::vector<Element> quotient(const CoxeterSystem& sys, const std::vector<Element>& ball,
                                     GeneratorSubset J) {
  std::vector<Element> out;
  for (const auto& w : ball)
    if (sys.is_min_rep(w, J, Side::Right)) out.push_back(w);
  return out;
}

// Faithful permutation representation with ShortLex normal forms found by
// breadth-first search. Generators act on the right: word a1..ak maps to
// g_a1 o ... o g_ak.
struct PermOracle {
  using Perm = std::vector<int>;
  std::vector<Perm> gens;
  std::map<Perm, Word> normal;

  explicit PermOracle(std::vector<Perm> g) : gens(std::move(g)) {
    Perm id(gens.at(0).size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
    std::deque<Perm> queue{id};
    normal[id] = {};
    while (!queue.empty()) {
      Perm p = queue.front();
      queue.pop_front();
      const Word w = normal[p];
      for (Gen s = 0; s < gens.size(); ++s) {
        Perm n = compose(p, gens[s]);
        if (normal.count(n)) continue;
        Word nw = w;
        nw.push_back(s);
        normal[n] = nw;
        queue.push_back(std::move(n));
      }
    }
  }

  static Perm compose(const Perm& f, const Perm& g) {
    Perm out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[static_cast<std::size_t>(g[i])];
    return out;
  }

  Perm evaluate(const Word& w) const {
    Perm p(gens[0].size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
    for (Gen s : w) p = compose(p, gens[s]);
    return p;
  }

  const Word& shortlex(const Word& w) const { return normal.at(evaluate(w)); }
  std::size_t order() const { return normal.size(); }

  static Perm swap(std::size_t n, std::vector<std::pair<int, int>> pairs) {
    Perm p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
    for (auto [a, b] : pairs) std::swap(p[a], p[b]);
    return p;
  }

  // Symmetric group on n+1 points, s_i = (i-1 i).
  static PermOracle type_a(std::size_t n) {
    std::vector<Perm> g;
    for (std::size_t i = 0; i < n; ++i)
      g.push_back(swap(n + 1, {{static_cast<int>(i), static_cast<int>(i + 1)}}));
    return PermOracle(g);
  }

  // Signed permutations of 3 letters; s1 negates the first coordinate,
  // s2, s3 are adjacent transpositions (m(s1,s2) = 4, m(s2,s3) = 3).
  static PermOracle type_b3() {
    return PermOracle({swap(6, {{0, 3}}), swap(6, {{0, 1}, {3, 4}}), swap(6, {{1, 2}, {4, 5}})});
  }

  static PermOracle a1xa1() { return PermOracle({swap(4, {{0, 1}}), swap(4, {{2, 3}})}); }
};

// Subword property: u <= v iff some subword of a reduced word for v is a
// reduced word for u (equivalently, multiplies to u).
inline bool subword_leq(const CoxeterSystem& sys, const Element& u, const Element& v) {
  const Word& w = v.word();
  const std::size_t n = w.size();
  if (u.length() > n) return false;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != u.length()) continue;
    Word sub;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) sub.push_back(w[i]);
    if (sys.element(sub) == u) return true;
  }
  return false;
}

// Memoized subword oracle over a fixed element list.
class SubwordTable {
public:
  SubwordTable(const CoxeterSystem& sys) : sys_(sys) {}
  bool leq(const Element& u, const Element& v) {
    auto key = std::make_pair(u.word(), v.word());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const bool r = subword_leq(sys_, u, v);
    memo_.emplace(std::move(key), r);
    return r;
  }

private:
  const CoxeterSystem& sys_;
  std::map<std::pair<Word, Word>, bool> memo_;
};

// Ordinary KL polynomials by the classical recursion, with an independent
// Bruhat test supplied by the caller.
class ClassicalKL {
public:
  ClassicalKL(const CoxeterSystem& sys, std::function<bool(const Element&, const Element&)> leq)
      : sys_(sys), leq_(std::move(leq)) {}

  LaurentPoly P(const Element& x, const Element& w) {
    if (!leq_(x, w)) return {};
    if (x == w) return LaurentPoly::constant(1);
    auto key = std::make_pair(x.word(), w.word());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    // s a left descent of w, v = sw.
    const Gen s = *w.descents(Side::Left).least();
    const Element v = sys_.multiply(w, s, Side::Left);
    const Element sx = sys_.multiply(x, s, Side::Left);
    const bool c = x.descents(Side::Left).contains(s);
    LaurentPoly res = P(sx, v).shifted(c ? 0 : 1) + P(x, v).shifted(c ? 1 : 0);
    for (const Element& z : between(x, v)) {
      if (z == v || !z.descents(Side::Left).contains(s)) continue;
      const std::int64_t m = mu(z, v);
      if (m == 0) continue;
      res -= (m * P(x, z)).shifted(static_cast<std::int64_t>((w.length() - z.length()) / 2));
    }
    memo_.emplace(std::move(key), res);
    return res;
  }

  std::int64_t mu(const Element& z, const Element& v) {
    const std::size_t d = v.length() - z.length();
    if (d % 2 == 0) return 0;
    return P(z, v).coefficient(static_cast<std::int64_t>((d - 1) / 2));
  }

  void set_universe(std::vector<Element> all) { universe_ = std::move(all); }

private:
  std::vector<Element> between(const Element& x, const Element& v) {
    std::vector<Element> out;
    for (const auto& z : universe_)
      if (z.length() >= x.length() && z.length() <= v.length() && leq_(x, z) && leq_(z, v))
        out.push_back(z);
    return out;
  }

  const CoxeterSystem& sys_;
  std::function<bool(const Element&, const Element&)> leq_;
  std::vector<Element> universe_;
  std::map<std::pair<Word, Word>, LaurentPoly> memo_;
};

// Elements of the parabolic subgroup W_J inside a finite ball.
inline std::vector<Element> parabolic_subgroup(const CoxeterSystem& sys,
                                               const std::vector<Element>& ball,
                                               GeneratorSubset J) {
  std::vector<Element> out;
  for (const auto& w : ball) {
    bool inside = true;
    for (Gen s : w.word()) inside = inside && J.contains(s);
    if (inside) out.push_back(w);
  }
  return out;
}

// Sum over w in W^J, u <= w <= v of
// (-1)^{l(v)-l(u)} q^{l(v)-l(w)} R_{w,v}(q^{-1}) R_{u,w}(q).
inline LaurentPoly r_inversion_sum(KLEngine& k, const Element& u, const Element& v,
                                   GeneratorSubset J, KLType x) {
  LaurentPoly sum;
  const std::int64_t sign = ((v.length() - u.length()) % 2) ? -1 : 1;
  for (const Element& w : k.quotient_interval(u, v, J)) {
    const LaurentPoly a = k.parabolic_r(w, v, J, x).bar().shifted(
        static_cast<std::int64_t>(v.length() - w.length()));
    sum += sign * (a * k.parabolic_r(u, w, J, x));
  }
  return sum;
}

} // namespace testsupport
