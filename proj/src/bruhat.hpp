#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coxeter.hpp"

namespace parakl {

// A graded poset given by its Hasse diagram. For Bruhat intervals `ground`
// holds the elements in ShortLex order, so index 0 is the bottom and the last
// index is the top. Abstract posets (tests, harness fixtures) leave `ground`
// empty.
struct IntervalPoset {
  std::vector<Element> ground;
  std::size_t bottom = 0;
  std::size_t top = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> covers; // (lower, upper)
  std::vector<std::uint32_t> rank;
  std::vector<bool> marked;

  std::size_t size() const { return rank.size(); }
  std::size_t marked_count() const;
  std::uint32_t height() const;
};

struct IntervalOptions {
  std::size_t max_length = 18;
};

bool bruhat_leq(const CoxeterSystem& sys, const Element& u, const Element& v);

// All z <= v, ShortLex order, built from distinct subword products of the
// canonical word of v.
std::vector<Element> lower_ideal(const CoxeterSystem& sys, const Element& v);

// Memoized lower ideals for one system; safe for concurrent use.
class IdealCache {
public:
  explicit IdealCache(CoxeterSystem sys) : sys_(std::move(sys)) {}
  std::shared_ptr<const std::vector<Element>> get(const Element& v);

private:
  CoxeterSystem sys_;
  std::mutex mu_;
  std::unordered_map<Element, std::shared_ptr<const std::vector<Element>>, ElementHash>
      table_;
};

IntervalPoset interval(const CoxeterSystem& sys, const Element& u, const Element& v,
                       const IntervalOptions& opts = {}, IdealCache* cache = nullptr);

// Full interval [u,v] with `marked` flagging [u,v]^J = [u,v] \cap W^J.
IntervalPoset parabolic_interval(const CoxeterSystem& sys, const Element& u,
                                 const Element& v, GeneratorSubset J,
                                 const IntervalOptions& opts = {},
                                 IdealCache* cache = nullptr);

// u <= v iff the projections to every maximal quotient compare.
bool deodhar_criterion(const CoxeterSystem& sys, const Element& u, const Element& v);

} // namespace parakl
