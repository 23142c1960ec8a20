#include "bruhat.hpp"

#include <algorithm>
#include <unordered_set>

#include "errors.hpp"

namespace parakl {

std::size_t IntervalPoset::marked_count() const {
  return static_cast<std::size_t>(std::count(marked.begin(), marked.end(), true));
}

std::uint32_t IntervalPoset::height() const {
  return rank.empty() ? 0 : *std::max_element(rank.begin(), rank.end());
}

bool bruhat_leq(const CoxeterSystem& sys, const Element& u, const Element& v) {
  sys.require_owned(u);
  sys.require_owned(v);
  if (u.length() > v.length()) return false;
  if (u.length() == v.length()) return u == v;
  return sys.strip_walk(u, v.word());
}

namespace {

std::vector<Element> extend_ideal(const CoxeterSystem& sys, Gen s,
                                  const std::vector<Element>& base) {
  std::unordered_set<Element, ElementHash> seen(base.begin(), base.end());
  std::vector<Element> out = base;
  for (const auto& z : base) {
    Element sz = sys.multiply(z, s, Side::Left);
    if (seen.insert(sz).second) out.push_back(std::move(sz));
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

std::vector<Element> lower_ideal(const CoxeterSystem& sys, const Element& v) {
  sys.require_owned(v);
  std::vector<Element> cur{sys.identity()};
  const auto& w = v.word();
  for (std::size_t i = w.size(); i-- > 0;) cur = extend_ideal(sys, w[i], cur);
  return cur;
}

std::shared_ptr<const std::vector<Element>> IdealCache::get(const Element& v) {
  {
    std::lock_guard lock(mu_);
    auto it = table_.find(v);
    if (it != table_.end()) return it->second;
  }
  std::shared_ptr<const std::vector<Element>> result;
  if (v.is_identity()) {
    result = std::make_shared<const std::vector<Element>>(1, sys_.identity());
  } else {
    const Word& w = v.word();
    // The tail of a ShortLex word is ShortLex, so no re-canonicalization.
    Element tail = sys_.element(std::span<const Gen>(w).subspan(1));
    auto base = get(tail);
    result = std::make_shared<const std::vector<Element>>(extend_ideal(sys_, w[0], *base));
  }
  std::lock_guard lock(mu_);
  return table_.emplace(v, std::move(result)).first->second;
}

IntervalPoset interval(const CoxeterSystem& sys, const Element& u, const Element& v,
                       const IntervalOptions& opts, IdealCache* cache) {
  sys.require_owned(u);
  sys.require_owned(v);
  if (v.length() > opts.max_length)
    throw LimitError("interval top has length " + std::to_string(v.length()) +
                     ", above the cutoff " + std::to_string(opts.max_length));
  if (!bruhat_leq(sys, u, v))
    throw PreconditionError("interval endpoints are not comparable: u is not <= v");

  std::vector<Element> ideal;
  if (cache) {
    ideal = *cache->get(v);
  } else {
    ideal = lower_ideal(sys, v);
  }

  IntervalPoset p;
  for (auto& z : ideal)
    if (bruhat_leq(sys, u, z)) p.ground.push_back(std::move(z));
  const std::size_t k = p.ground.size();
  p.bottom = 0;
  p.top = k - 1;
  PARAKL_CHECK(p.ground.front() == u && p.ground.back() == v);
  p.rank.resize(k);
  for (std::size_t i = 0; i < k; ++i)
    p.rank[i] = static_cast<std::uint32_t>(p.ground[i].length() - u.length());
  p.marked.assign(k, true);

  // Ground is sorted by length, so rank levels are contiguous.
  std::vector<std::size_t> level_start;
  for (std::size_t i = 0; i < k; ++i)
    if (i == 0 || p.rank[i] != p.rank[i - 1]) level_start.push_back(i);
  level_start.push_back(k);
  for (std::size_t l = 0; l + 2 < level_start.size(); ++l)
    for (std::size_t a = level_start[l]; a < level_start[l + 1]; ++a)
      for (std::size_t b = level_start[l + 1]; b < level_start[l + 2]; ++b)
        if (bruhat_leq(sys, p.ground[a], p.ground[b]))
          p.covers.emplace_back(static_cast<std::uint32_t>(a),
                                static_cast<std::uint32_t>(b));
  return p;
}

IntervalPoset parabolic_interval(const CoxeterSystem& sys, const Element& u,
                                 const Element& v, GeneratorSubset J,
                                 const IntervalOptions& opts, IdealCache* cache) {
  if (!sys.is_min_rep(u, J, Side::Right) || !sys.is_min_rep(v, J, Side::Right))
    throw PreconditionError("interval endpoints must lie in the quotient W^J");
  IntervalPoset p = interval(sys, u, v, opts, cache);
  for (std::size_t i = 0; i < p.size(); ++i)
    p.marked[i] = sys.is_min_rep(p.ground[i], J, Side::Right);
  return p;
}

bool deodhar_criterion(const CoxeterSystem& sys, const Element& u, const Element& v) {
  const auto all = GeneratorSubset::all(sys.rank());
  for (Gen s = 0; s < sys.rank(); ++s) {
    const auto J = all.without(s);
    if (!bruhat_leq(sys, sys.project(u, J, Side::Right), sys.project(v, J, Side::Right)))
      return false;
  }
  return true;
}

} // namespace parakl
