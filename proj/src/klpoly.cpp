#include "klpoly.hpp"

#include <algorithm>
#include <limits>

#include "errors.hpp"

namespace parakl {

const char* kl_type_name(KLType x) { return x == KLType::Q ? "q" : "-1"; }
const char* poly_kind_name(PolyKind k) { return k == PolyKind::R ? "R" : "P"; }

bool operator<(const PolyKey& a, const PolyKey& b) {
  auto tie = [](const PolyKey& k) {
    return std::make_tuple(k.kind, k.x, k.J, k.v.size(), std::cref(k.v), k.u.size(),
                           std::cref(k.u));
  };
  return tie(a) < tie(b);
}

std::size_t PolyKeyHash::operator()(const PolyKey& k) const {
  std::size_t h = hash_word(k.u);
  h = h * 1000003u ^ hash_word(k.v);
  h = h * 1000003u ^ std::hash<std::uint64_t>{}(k.J);
  h = h * 31u + static_cast<std::size_t>(k.x) * 2 + static_cast<std::size_t>(k.kind);
  return h;
}

std::optional<LaurentPoly> KLTable::find(const PolyKey& key) const {
  std::shared_lock lock(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  if (it->second.from_cache) cache_hits_.fetch_add(1);
  return it->second.value;
}

void KLTable::insert(const PolyKey& key, const LaurentPoly& value, bool from_cache) {
  std::unique_lock lock(mu_);
  map_.emplace(key, Entry{value, from_cache});
}

std::size_t KLTable::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

void KLTable::mark_persisted() {
  std::unique_lock lock(mu_);
  for (auto& [k, e] : map_) e.from_cache = true;
}

void KLTable::clear() {
  std::unique_lock lock(mu_);
  map_.clear();
  cache_hits_ = 0;
}

std::vector<KLTable::Row> KLTable::rows() const {
  std::vector<Row> out;
  {
    std::shared_lock lock(mu_);
    out.reserve(map_.size());
    for (const auto& [k, e] : map_) out.push_back({k, e.value, e.from_cache});
  }
  std::sort(out.begin(), out.end(), [](const Row& a, const Row& b) { return a.key < b.key; });
  return out;
}

KLEngine::KLEngine(CoxeterSystem sys, IntervalOptions opts)
    : sys_(sys), opts_(opts), ideals_(std::move(sys)) {}

void KLEngine::clear() {
  table_.clear();
  duality_p_.clear();
  duality_r_.clear();
}

void KLEngine::require_quotient(const Element& u, const Element& v,
                                GeneratorSubset J) const {
  sys_.require_owned(u);
  sys_.require_owned(v);
  if (!J.subset_of(GeneratorSubset::all(sys_.rank())))
    throw InputError("quotient subset contains unknown generators");
  if (!sys_.is_min_rep(u, J, Side::Right) || !sys_.is_min_rep(v, J, Side::Right))
    throw PreconditionError("polynomial endpoints must lie in the quotient W^J");
}

Element KLEngine::tail(const Element& v) const {
  return sys_.element(std::span<const Gen>(v.word()).subspan(1));
}

std::shared_ptr<const std::vector<Element>> KLEngine::quotient_ideal(const Element& v,
                                                                     GeneratorSubset J) {
  auto key = std::make_pair(v.word(), J.bits());
  {
    std::lock_guard lock(qmu_);
    auto it = quotient_ideals_.find(key);
    if (it != quotient_ideals_.end()) return it->second;
  }
  if (v.length() > opts_.max_length)
    throw LimitError("element length " + std::to_string(v.length()) +
                     " exceeds the interval cutoff " + std::to_string(opts_.max_length));
  auto ideal = ideals_.get(v);
  std::vector<Element> out;
  for (const auto& z : *ideal)
    if (sys_.is_min_rep(z, J, Side::Right)) out.push_back(z);
  auto ptr = std::make_shared<const std::vector<Element>>(std::move(out));
  std::lock_guard lock(qmu_);
  return quotient_ideals_.emplace(std::move(key), std::move(ptr)).first->second;
}

std::vector<Element> KLEngine::quotient_interval(const Element& u, const Element& v,
                                                 GeneratorSubset J) {
  std::vector<Element> out;
  if (!leq(u, v)) return out;
  for (const auto& z : *quotient_ideal(v, J))
    if (z.length() >= u.length() && leq(u, z)) out.push_back(z);
  return out;
}

// --------------------------------------------------------------------------
// R-polynomials

LaurentPoly KLEngine::r_impl(const Element& u, const Element& v, GeneratorSubset J,
                             KLType x, KLTable& table) {
  if (!leq(u, v)) return {};
  if (u == v) return LaurentPoly::constant(1);
  const PolyKey key{u.word(), v.word(), J.bits(), x, PolyKind::R};
  if (auto hit = table.find(key)) return *hit;

  const Gen s = v.word().front();
  const Element sv = tail(v);
  const LaurentPoly q_minus_1(0, {-1, 1});
  LaurentPoly res;
  if (u.descents(Side::Left).contains(s)) {
    res = r_impl(sys_.multiply(u, s, Side::Left), sv, J, x, table);
  } else {
    const Element su = sys_.multiply(u, s, Side::Left);
    if (sys_.is_min_rep(su, J, Side::Right)) {
      res = q_minus_1 * r_impl(u, sv, J, x, table) +
            LaurentPoly::q() * r_impl(su, sv, J, x, table);
    } else {
      // q - 1 - x: -1 for x = q, q for x = -1.
      const LaurentPoly factor =
          x == KLType::Q ? LaurentPoly::constant(-1) : LaurentPoly::q();
      res = factor * r_impl(u, sv, J, x, table);
    }
  }
  table.insert(key, res);
  return res;
}

LaurentPoly KLEngine::parabolic_r(const Element& u, const Element& v, GeneratorSubset J,
                                  KLType x) {
  require_quotient(u, v, J);
  return r_impl(u, v, J, x, table_);
}

// --------------------------------------------------------------------------
// KL polynomials, recursion route

LaurentPoly KLEngine::p_impl(const Element& u, const Element& v, GeneratorSubset J,
                             KLType x) {
  if (!leq(u, v)) return {};
  if (u == v) return LaurentPoly::constant(1);
  const PolyKey key{u.word(), v.word(), J.bits(), x, PolyKind::P};
  if (auto hit = table_.find(key)) return *hit;

  const Gen s = v.word().front();
  const Element sv = tail(v);
  LaurentPoly res;
  if (u.descents(Side::Left).contains(s)) {
    const Element su = sys_.multiply(u, s, Side::Left);
    res = p_impl(su, sv, J, x) + LaurentPoly::q() * p_impl(u, sv, J, x);
  } else {
    const Element su = sys_.multiply(u, s, Side::Left);
    if (sys_.is_min_rep(su, J, Side::Right)) {
      res = LaurentPoly::q() * p_impl(su, sv, J, x) + p_impl(u, sv, J, x);
    } else if (x == KLType::Q) {
      res = LaurentPoly(0, {1, 1}) * p_impl(u, sv, J, x);
    }
    // x = -1: the factor x + 1 vanishes.
  }

  for (const Element& w : quotient_interval(u, sv, J)) {
    if (w == sv) continue;
    bool included = w.descents(Side::Left).contains(s);
    if (!included && x == KLType::Q)
      included = !sys_.is_min_rep(sys_.multiply(w, s, Side::Left), J, Side::Right);
    if (!included) continue;
    const std::int64_t m = mu(w, sv, J, x);
    if (m == 0) continue;
    const std::size_t gap = v.length() - w.length();
    PARAKL_CHECK(gap % 2 == 0);
    res -= (m * p_impl(u, w, J, x)).shifted(static_cast<std::int64_t>(gap / 2));
  }

  const std::int64_t d = static_cast<std::int64_t>(v.length() - u.length());
  if (!res.is_zero() && (res.offset() < 0 || 2 * res.degree() > d - 1))
    throw InternalError("KL recursion violated the degree bound at u=" + sys_.display(u) +
                        ", v=" + sys_.display(v));
  table_.insert(key, res);
  return res;
}

LaurentPoly KLEngine::parabolic_kl(const Element& u, const Element& v, GeneratorSubset J,
                                   KLType x) {
  require_quotient(u, v, J);
  return p_impl(u, v, J, x);
}

std::int64_t KLEngine::mu(const Element& w, const Element& v, GeneratorSubset J,
                          KLType x) {
  require_quotient(w, v, J);
  if (w == v || w.length() > v.length()) return 0;
  const std::size_t gap = v.length() - w.length();
  if (gap % 2 == 0) return 0;
  return p_impl(w, v, J, x).coefficient(static_cast<std::int64_t>((gap - 1) / 2));
}

// --------------------------------------------------------------------------
// KL polynomials, duality route

LaurentPoly KLEngine::pd_impl(const Element& u, const Element& v, GeneratorSubset J,
                              KLType x) {
  if (!leq(u, v)) return {};
  if (u == v) return LaurentPoly::constant(1);
  const PolyKey key{u.word(), v.word(), J.bits(), x, PolyKind::P};
  if (auto hit = duality_p_.find(key)) return *hit;

  const std::int64_t lv = static_cast<std::int64_t>(v.length());
  const std::int64_t lu = static_cast<std::int64_t>(u.length());
  const std::int64_t d = lv - lu;

  LaurentPoly rhs;
  for (const Element& w : quotient_interval(u, v, J)) {
    if (w == u) continue;
    const std::int64_t lw = static_cast<std::int64_t>(w.length());
    LaurentPoly term =
        r_impl(u, w, J, x, duality_r_) * pd_impl(w, v, J, x).bar().shifted(lv - lw);
    if ((lw - lu) % 2 != 0) term = -term;
    rhs += term;
  }

  // rhs = P - q^d P(q^{-1}); exponents of P are <= (d-1)/2 < d/2.
  const std::int64_t low_top = (d - 1) / 2;
  LaurentPoly p = rhs.truncated(std::numeric_limits<std::int64_t>::min() / 2, low_top);
  if ((!p.is_zero() && p.offset() < 0) || rhs - p != -(p.bar().shifted(d)))
    throw InternalError("duality identity has no solution at u=" + sys_.display(u) +
                        ", v=" + sys_.display(v));
  duality_p_.insert(key, p);
  return p;
}

LaurentPoly KLEngine::parabolic_kl_duality(const Element& u, const Element& v,
                                           GeneratorSubset J, KLType x) {
  require_quotient(u, v, J);
  return pd_impl(u, v, J, x);
}

LaurentPoly KLEngine::compute(const Element& u, const Element& v, GeneratorSubset J,
                              KLType x, PolyKind kind, Method method) {
  if (kind == PolyKind::R) {
    if (method == Method::Duality) {
      require_quotient(u, v, J);
      return r_impl(u, v, J, x, duality_r_);
    }
    return parabolic_r(u, v, J, x);
  }
  if (method == Method::Duality) return parabolic_kl_duality(u, v, J, x);
  return parabolic_kl(u, v, J, x);
}

} // namespace parakl
