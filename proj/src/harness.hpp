#pragma once

// Combinatorial-invariance scan. Enumerates parabolic intervals across the
// configured systems and quotients, groups them into classes of isomorphic
// intervals (isomorphisms must carry the marked set [u,v]^J onto the marked
// set), and checks that each class carries a single polynomial per type.
// Comparing every case with its class representative covers all pairs, since
// both isomorphism and polynomial equality are transitive.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bruhat.hpp"
#include "coxeter.hpp"
#include "extension.hpp"
#include "klpoly.hpp"
#include "poset_iso.hpp"

namespace parakl {

enum class QuotientMode { All, Maximal };
const char* quotient_mode_name(QuotientMode m);

struct ScanConfig {
  std::vector<CoxeterSystem> systems;
  std::vector<QuotientMode> modes{QuotientMode::All};
  std::size_t max_length = 6;   // bound on l(v)
  std::size_t max_rank = 4;     // bound on l(v) - l(u)
  std::size_t max_interval_size = kDefaultPosetCap;
  std::vector<KLType> types{KLType::Q, KLType::MinusOne};
  bool r_polynomials = true;
  std::optional<ClassX> class_x;
  bool positive_controls = true;
};

struct ScanCase {
  std::size_t system = 0;
  GeneratorSubset J;
  Element u, v;
};

struct CaseValues {
  PolyKind kind;
  KLType x;
  LaurentPoly value;
};

// One hypothesis hit: `a` was found isomorphic to class representative `b`.
struct ScanHit {
  ScanCase a, b;
  std::vector<CaseValues> values_a, values_b;
  std::vector<std::uint32_t> map;
  bool equal = true;
};

struct ControlFailure {
  ScanCase base;
  std::string reason;
};

struct ModeReport {
  QuotientMode mode = QuotientMode::All;
  std::size_t pairs_enumerated = 0;
  std::size_t skipped_oversize = 0;
  std::size_t classes = 0;
  std::size_t hypothesis_hits = 0;
  std::size_t equalities_verified = 0;
  std::vector<ScanHit> hits;            // every hit, equal or not
  std::size_t counterexamples = 0;      // hits with equal == false
  std::size_t controls_checked = 0;
  std::size_t controls_passed = 0;
  std::vector<ControlFailure> control_failures;
};

struct ScanReport {
  std::vector<std::string> systems;         // names of scanned systems
  std::vector<std::string> skipped_systems; // filtered out by class X
  std::optional<ClassX> class_x;
  std::vector<ModeReport> modes;

  std::size_t counterexamples() const;
  std::size_t control_failures() const;
  bool clean() const { return counterexamples() == 0 && control_failures() == 0; }
};

class Scanner {
public:
  explicit Scanner(ScanConfig cfg);

  const ScanConfig& config() const { return cfg_; }
  // Engines are created up front so callers may preload polynomial caches.
  KLEngine& engine(std::size_t system) { return *engines_.at(system); }
  std::size_t system_count() const { return engines_.size(); }

  ScanReport run();

private:
  struct Extension {
    ExtendedSystem ext;
    std::unique_ptr<KLEngine> engine;
  };

  std::vector<ScanCase> enumerate(QuotientMode mode, const std::vector<std::size_t>& active);
  std::vector<CaseValues> values(const ScanCase& c);
  std::vector<CaseValues> lifted_values(Extension& e, const Element& lu, const Element& lv);
  Extension& extension(std::size_t system, GeneratorSubset J);
  IntervalPoset interval_of(const ScanCase& c);
  void control(const ScanCase& c, const IntervalPoset& p, ModeReport& rep);

  ScanConfig cfg_;
  std::vector<std::unique_ptr<KLEngine>> engines_;
  std::map<std::pair<std::size_t, std::uint64_t>, Extension> extensions_;
};

// check_hypothesis_pair: returns a witness Phi : [u,v] -> [u',v'] with
// Phi([u,v]^J) = [u',v']^{J'} when one exists.
std::optional<IsoWitness> check_hypothesis_pair(const CoxeterSystem& sa, const Element& ua,
                                                const Element& va, GeneratorSubset Ja,
                                                const CoxeterSystem& sb, const Element& ub,
                                                const Element& vb, GeneratorSubset Jb,
                                                std::size_t max_size = kDefaultPosetCap);

} // namespace parakl
