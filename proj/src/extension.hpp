#pragma once

// Maximal-quotient reduction. Given (W,S) and J, adjoin a generator s~ with
//   m'(s,t)  = m(s,t)  for s,t in S,
//   m'(s~,s) = 2       for s in J,
//   m'(s~,s) != 2      for s in S \ J,
// so that P^{J,x}_{u,v}[W,S] = P^{S,x}_{u s~, v s~}[W~,S~]. Elements lift by
// z -> z s~, which embeds W^J into W~^S as an order isomorphism onto
// W~^S \cap W s~.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bruhat.hpp"
#include "coxeter.hpp"
#include "klpoly.hpp"
#include "laurent.hpp"
#include "poset_iso.hpp"

namespace parakl {

// Nonempty subset of {3,4,5,...} u {inf}; kInfinity encodes inf.
class ClassX {
public:
  explicit ClassX(std::set<Bond> values);
  static ClassX parse(std::string_view text); // "3,inf"

  const std::set<Bond>& values() const { return values_; }
  bool contains(Bond b) const { return values_.count(b) != 0; }
  // 3 when allowed, else the smallest finite value, else inf.
  Bond preferred() const;
  std::string to_string() const;

private:
  std::set<Bond> values_;
};

// Every off-diagonal entry lies in X u {2}.
bool is_class_x(const CoxeterMatrix& m, const ClassX& X);

std::string format_bond(Bond b);
// "3", "inf"; throws InputError otherwise.
Bond parse_bond(std::string_view text);

using ExtensionPolicy = std::map<Gen, Bond>;

// "s1=3,s3=inf" resolved against the base generator names.
ExtensionPolicy parse_policy(const CoxeterSystem& sys, std::string_view text);

struct ExtendedSystem {
  CoxeterSystem base;
  GeneratorSubset J;
  Gen stilde = 0;
  CoxeterSystem extended;
  ExtensionPolicy policy; // resolved bond for every s in S \ J

  // The base generators S as a subset of S~.
  GeneratorSubset base_generators() const {
    return GeneratorSubset::all(base.rank());
  }
};

ExtendedSystem extend_system(const CoxeterSystem& sys, GeneratorSubset J,
                             const ExtensionPolicy& policy = {},
                             const std::optional<ClassX>& X = std::nullopt);

// z -> canonical form of z s~ in W~.
Element lift(const ExtendedSystem& ext, const Element& z);

struct LiftedInterval {
  IntervalPoset lifted; // [u s~, v s~] with marked set [u s~, v s~]^S
  IsoWitness witness;   // [u,v] -> [u s~, v s~], z -> z s~
};

LiftedInterval lift_interval(const ExtendedSystem& ext, const Element& u, const Element& v,
                             const IntervalOptions& opts = {});

struct ReductionRecord {
  Element u, v;
  PolyKind kind = PolyKind::P;
  KLType x = KLType::Q;
  LaurentPoly lhs, rhs;
  bool paths_agree = true; // recursion == duality on both sides (P only)
  bool equal = true;       // lhs == rhs and paths_agree
};

struct ReductionReport {
  std::vector<ReductionRecord> records;
  std::size_t pairs = 0;
  std::size_t equal = 0;
  std::size_t unequal = 0;

  bool all_equal() const { return unequal == 0; }
};

// Both sides for x in {q,-1}, P via both routes and R.
ReductionReport verify_reduction(const ExtendedSystem& ext, KLEngine& base,
                                 KLEngine& extended, const Element& u, const Element& v);

// verify_reduction over every u <= v in W^J with l(v) <= max_length.
ReductionReport verify_reduction_all(const ExtendedSystem& ext, KLEngine& base,
                                     KLEngine& extended, std::size_t max_length);

} // namespace parakl
