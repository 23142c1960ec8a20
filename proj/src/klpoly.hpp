#pragma once

// Parabolic R-polynomials and Kazhdan-Lusztig polynomials of both types.
//
// Conventions: quotients are right quotients W^J (no right descent in J) and
// every recursion peels off the least left descent s of the top element v.
// The KL polynomials are computed along two independent routes:
//
//   * parabolic_kl_duality: the defining characterization. P_{v,v} = 1, the
//     degree bound deg P_{u,v} <= (l(v)-l(u)-1)/2, and
//       P_{u,v} = q^{l(v)} sum_{w in W^J, u<=w<=v}
//                 (-1)^{l(w)-l(u)} q^{-l(w)} R_{u,w}(q) P_{w,v}(q^{-1}).
//     The w = u term is q^{l(v)-l(u)} P_{u,v}(q^{-1}); moving it left gives
//     P - q^d bar(P) = (rest), and the degree bound separates the two sides.
//
//   * parabolic_kl: the mu-recursion fast path. With su the left product,
//       su < u          : P_{su,sv} + q P_{u,sv}
//       su > u, su in W^J: q P_{su,sv} + P_{u,sv}
//       su not in W^J   : (x+1) P_{u,sv}
//     minus sum mu(w,sv) q^{(l(v)-l(w))/2} P_{u,w} over w in W^J, u<=w<sv,
//     restricted to sw < w (x = -1) or sw < w or sw not in W^J (x = q).
//
// The duality route is authoritative; the test suites hold the recursion to
// it on every enumerated pair.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bruhat.hpp"
#include "coxeter.hpp"
#include "laurent.hpp"

namespace parakl {

enum class KLType : std::uint8_t { Q, MinusOne };
enum class PolyKind : std::uint8_t { R, P };
enum class Method : std::uint8_t { Recursion, Duality, Both };

const char* kl_type_name(KLType x);  // "q" / "-1"
const char* poly_kind_name(PolyKind k); // "R" / "P"

struct PolyKey {
  Word u, v;
  std::uint64_t J = 0;
  KLType x = KLType::Q;
  PolyKind kind = PolyKind::P;

  friend bool operator==(const PolyKey&, const PolyKey&) = default;
  friend bool operator<(const PolyKey& a, const PolyKey& b);
};

struct PolyKeyHash {
  std::size_t operator()(const PolyKey& k) const;
};

// Concurrent memo table. Entries are immutable once inserted; a second insert
// of the same key keeps the first value.
class KLTable {
public:
  std::optional<LaurentPoly> find(const PolyKey& key) const;
  void insert(const PolyKey& key, const LaurentPoly& value, bool from_cache = false);
  std::size_t size() const;
  std::size_t cache_hits() const { return cache_hits_.load(); }
  // Flags every entry as present in the cache file.
  void mark_persisted();
  void clear();

  struct Row {
    PolyKey key;
    LaurentPoly value;
    bool from_cache;
  };
  // Sorted by key.
  std::vector<Row> rows() const;

private:
  struct Entry {
    LaurentPoly value;
    bool from_cache;
  };
  mutable std::shared_mutex mu_;
  std::unordered_map<PolyKey, Entry, PolyKeyHash> map_;
  mutable std::atomic<std::size_t> cache_hits_{0};
};

class KLEngine {
public:
  explicit KLEngine(CoxeterSystem sys, IntervalOptions opts = {});

  const CoxeterSystem& system() const { return sys_; }

  LaurentPoly parabolic_r(const Element& u, const Element& v, GeneratorSubset J, KLType x);
  LaurentPoly parabolic_kl(const Element& u, const Element& v, GeneratorSubset J, KLType x);
  LaurentPoly parabolic_kl_duality(const Element& u, const Element& v, GeneratorSubset J,
                                   KLType x);
  std::int64_t mu(const Element& w, const Element& v, GeneratorSubset J, KLType x);

  LaurentPoly compute(const Element& u, const Element& v, GeneratorSubset J, KLType x,
                      PolyKind kind, Method method);

  // W^J \cap [u,v] in ShortLex order.
  std::vector<Element> quotient_interval(const Element& u, const Element& v,
                                         GeneratorSubset J);

  bool leq(const Element& u, const Element& v) const { return bruhat_leq(sys_, u, v); }

  // Values of the recursion route (P) and of parabolic_r (R). Cache files
  // load into and store from this table; the duality route never reads it.
  KLTable& table() { return table_; }
  const KLTable& table() const { return table_; }
  IdealCache& ideals() { return ideals_; }
  const IntervalOptions& options() const { return opts_; }

  // Drops every memoized polynomial (ideals are kept).
  void clear();

private:
  void require_quotient(const Element& u, const Element& v, GeneratorSubset J) const;
  Element tail(const Element& v) const;
  LaurentPoly r_impl(const Element& u, const Element& v, GeneratorSubset J, KLType x,
                     KLTable& table);
  LaurentPoly p_impl(const Element& u, const Element& v, GeneratorSubset J, KLType x);
  LaurentPoly pd_impl(const Element& u, const Element& v, GeneratorSubset J, KLType x);
  std::shared_ptr<const std::vector<Element>> quotient_ideal(const Element& v,
                                                             GeneratorSubset J);

  CoxeterSystem sys_;
  IntervalOptions opts_;
  IdealCache ideals_;
  KLTable table_;
  KLTable duality_p_;
  KLTable duality_r_;

  std::mutex qmu_;
  std::map<std::pair<Word, std::uint64_t>, std::shared_ptr<const std::vector<Element>>>
      quotient_ideals_;
};

} // namespace parakl
