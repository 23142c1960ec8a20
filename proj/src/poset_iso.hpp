#pragma once

// Isomorphisms between graded posets given by Hasse diagrams, optionally
// constrained to carry a marked subset onto the marked subset.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bruhat.hpp"

namespace parakl {

struct IsoWitness {
  IntervalPoset source;
  IntervalPoset target;
  std::vector<std::uint32_t> map; // source index -> target index
  bool respects_marking = false;
};

inline constexpr std::size_t kDefaultPosetCap = 40;

// Calls `visit` once per isomorphism a -> b; stops early when it returns
// false. Throws LimitError when either poset exceeds `max_size`.
void for_each_isomorphism(const IntervalPoset& a, const IntervalPoset& b,
                          bool respect_marking,
                          const std::function<bool(const std::vector<std::uint32_t>&)>& visit,
                          std::size_t max_size = kDefaultPosetCap);

std::vector<IsoWitness> find_isomorphisms(const IntervalPoset& a, const IntervalPoset& b,
                                          bool respect_marking,
                                          std::size_t max_size = kDefaultPosetCap);

std::optional<IsoWitness> find_isomorphism(const IntervalPoset& a, const IntervalPoset& b,
                                           bool respect_marking,
                                           std::size_t max_size = kDefaultPosetCap);

// Independent re-check of a witness against the transitive closures of both
// Hasse diagrams: bijective, order preserved and reflected, ranks preserved
// and, when respects_marking is set, marked set carried onto marked set.
bool verify_witness(const IsoWitness& w);

// Cheap invariant used to bucket posets before any search.
struct PosetFingerprint {
  std::size_t size = 0;
  std::size_t covers = 0;
  std::vector<std::uint32_t> rank_sizes;
  std::vector<std::uint32_t> marked_rank_sizes;

  friend auto operator<=>(const PosetFingerprint&, const PosetFingerprint&) = default;
};

PosetFingerprint fingerprint(const IntervalPoset& p);

// Builds an abstract poset from ranks and covers (ground left empty).
IntervalPoset make_poset(std::vector<std::uint32_t> rank,
                         std::vector<std::pair<std::uint32_t, std::uint32_t>> covers,
                         std::vector<bool> marked = {});

} // namespace parakl
