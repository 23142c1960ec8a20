#include "poset_iso.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "errors.hpp"

namespace parakl {

namespace {

struct Prepared {
  std::size_t n = 0;
  std::vector<std::vector<std::uint32_t>> down, up;
  std::vector<std::uint64_t> below, above; // closures as bitsets
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, int, int, bool>> sig;
  std::vector<std::uint32_t> order; // by rank
};

Prepared prepare(const IntervalPoset& p, bool respect_marking) {
  Prepared r;
  r.n = p.size();
  r.down.resize(r.n);
  r.up.resize(r.n);
  for (auto [lo, hi] : p.covers) {
    r.down[hi].push_back(lo);
    r.up[lo].push_back(hi);
  }
  r.order.resize(r.n);
  std::iota(r.order.begin(), r.order.end(), 0u);
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return p.rank[a] < p.rank[b]; });
  r.below.assign(r.n, 0);
  r.above.assign(r.n, 0);
  for (std::uint32_t i : r.order) {
    r.below[i] = 1ULL << i;
    for (auto c : r.down[i]) r.below[i] |= r.below[c];
  }
  for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
    const std::uint32_t i = *it;
    r.above[i] = 1ULL << i;
    for (auto c : r.up[i]) r.above[i] |= r.above[c];
  }
  r.sig.resize(r.n);
  for (std::size_t i = 0; i < r.n; ++i) {
    const bool mk = respect_marking && !p.marked.empty() && p.marked[i];
    r.sig[i] = {p.rank[i], static_cast<std::uint32_t>(r.down[i].size()),
                static_cast<std::uint32_t>(r.up[i].size()), std::popcount(r.below[i]),
                std::popcount(r.above[i]), mk};
  }
  return r;
}

class Search {
public:
  Search(const Prepared& a, const Prepared& b,
         const std::function<bool(const std::vector<std::uint32_t>&)>& visit)
      : a_(a), b_(b), visit_(visit), map_(a.n, kUnset), used_(b.n, false) {}

  void run() { step(0); }

private:
  static constexpr std::uint32_t kUnset = ~0u;

  // Returns false when the visitor asked to stop.
  bool step(std::size_t k) {
    if (k == a_.n) return visit_(map_);
    const std::uint32_t x = a_.order[k];
    for (std::uint32_t y = 0; y < b_.n; ++y) {
      if (used_[y] || a_.sig[x] != b_.sig[y]) continue;
      bool ok = true;
      for (auto c : a_.down[x]) {
        const auto& dy = b_.down[y];
        if (std::find(dy.begin(), dy.end(), map_[c]) == dy.end()) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      map_[x] = y;
      used_[y] = true;
      const bool cont = step(k + 1);
      used_[y] = false;
      map_[x] = kUnset;
      if (!cont) return false;
    }
    return true;
  }

  const Prepared& a_;
  const Prepared& b_;
  const std::function<bool(const std::vector<std::uint32_t>&)>& visit_;
  std::vector<std::uint32_t> map_;
  std::vector<bool> used_;
};

} // namespace

void for_each_isomorphism(const IntervalPoset& a, const IntervalPoset& b,
                          bool respect_marking,
                          const std::function<bool(const std::vector<std::uint32_t>&)>& visit,
                          std::size_t max_size) {
  const std::size_t cap = std::min<std::size_t>(max_size, 64);
  if (a.size() > cap || b.size() > cap)
    throw LimitError("poset of size " + std::to_string(std::max(a.size(), b.size())) +
                     " exceeds the isomorphism search cap " + std::to_string(cap));
  if (a.size() != b.size() || a.covers.size() != b.covers.size()) return;
  const Prepared pa = prepare(a, respect_marking);
  const Prepared pb = prepare(b, respect_marking);
  auto sa = pa.sig, sb = pb.sig;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return;
  Search(pa, pb, visit).run();
}

std::vector<IsoWitness> find_isomorphisms(const IntervalPoset& a, const IntervalPoset& b,
                                          bool respect_marking, std::size_t max_size) {
  std::vector<IsoWitness> out;
  for_each_isomorphism(
      a, b, respect_marking,
      [&](const std::vector<std::uint32_t>& m) {
        out.push_back({a, b, m, respect_marking});
        return true;
      },
      max_size);
  return out;
}

std::optional<IsoWitness> find_isomorphism(const IntervalPoset& a, const IntervalPoset& b,
                                           bool respect_marking, std::size_t max_size) {
  std::optional<IsoWitness> out;
  for_each_isomorphism(
      a, b, respect_marking,
      [&](const std::vector<std::uint32_t>& m) {
        out = IsoWitness{a, b, m, respect_marking};
        return false;
      },
      max_size);
  return out;
}

namespace {

std::vector<std::vector<bool>> order_relation(const IntervalPoset& p) {
  const std::size_t n = p.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) le[i][i] = true;
  for (auto [lo, hi] : p.covers) le[lo][hi] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (le[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (le[k][j]) le[i][j] = true;
  return le;
}

} // namespace

bool verify_witness(const IsoWitness& w) {
  const auto& a = w.source;
  const auto& b = w.target;
  const std::size_t n = a.size();
  if (b.size() != n || w.map.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (auto y : w.map) {
    if (y >= n || hit[y]) return false;
    hit[y] = true;
  }
  const auto la = order_relation(a);
  const auto lb = order_relation(b);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.rank[i] != b.rank[w.map[i]]) return false;
    for (std::size_t j = 0; j < n; ++j)
      if (la[i][j] != lb[w.map[i]][w.map[j]]) return false;
  }
  if (w.respects_marking) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool ma = !a.marked.empty() && a.marked[i];
      const bool mb = !b.marked.empty() && b.marked[w.map[i]];
      if (ma != mb) return false;
    }
  }
  return true;
}

PosetFingerprint fingerprint(const IntervalPoset& p) {
  PosetFingerprint f;
  f.size = p.size();
  f.covers = p.covers.size();
  const std::uint32_t h = p.height();
  f.rank_sizes.assign(p.size() ? h + 1 : 0, 0);
  f.marked_rank_sizes.assign(p.size() ? h + 1 : 0, 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    ++f.rank_sizes[p.rank[i]];
    if (!p.marked.empty() && p.marked[i]) ++f.marked_rank_sizes[p.rank[i]];
  }
  return f;
}

IntervalPoset make_poset(std::vector<std::uint32_t> rank,
                         std::vector<std::pair<std::uint32_t, std::uint32_t>> covers,
                         std::vector<bool> marked) {
  IntervalPoset p;
  p.rank = std::move(rank);
  p.covers = std::move(covers);
  p.marked = marked.empty() ? std::vector<bool>(p.rank.size(), true) : std::move(marked);
  for (auto [lo, hi] : p.covers)
    if (lo >= p.size() || hi >= p.size() || p.rank[hi] != p.rank[lo] + 1)
      throw InputError("cover relation must join consecutive ranks");
  if (!p.rank.empty()) {
    p.bottom = static_cast<std::size_t>(
        std::min_element(p.rank.begin(), p.rank.end()) - p.rank.begin());
    p.top = static_cast<std::size_t>(
        std::max_element(p.rank.begin(), p.rank.end()) - p.rank.begin());
  }
  return p;
}

} // namespace parakl
