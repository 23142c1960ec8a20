#pragma once

// Coxeter systems and their elements.
//
// Elements are stored as ShortLex-least reduced words with respect to the
// declaration order of the generators. Lengths and descents are decided in
// the reflection representation with exact scalars, which works uniformly for
// finite and infinite groups.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace parakl {

using Gen = std::uint8_t;
using Word = std::vector<Gen>;

inline constexpr std::size_t kMaxGenerators = 64;

// Coxeter matrix entries; 0 encodes m = infinity.
using Bond = std::uint32_t;
inline constexpr Bond kInfinity = 0;

enum class Side { Left, Right };
enum class Backend { Crystallographic, General };

const char* backend_name(Backend b);
std::optional<Backend> parse_backend(std::string_view s);

class GeneratorSubset {
public:
  constexpr GeneratorSubset() = default;
  constexpr explicit GeneratorSubset(std::uint64_t bits) : bits_(bits) {}

  static GeneratorSubset all(std::size_t n) {
    return GeneratorSubset(n >= 64 ? ~0ULL : ((1ULL << n) - 1));
  }
  static GeneratorSubset single(Gen s) { return GeneratorSubset(1ULL << s); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(Gen s) const { return (bits_ >> s) & 1ULL; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const { return std::popcount(bits_); }
  GeneratorSubset with(Gen s) const { return GeneratorSubset(bits_ | (1ULL << s)); }
  GeneratorSubset without(Gen s) const { return GeneratorSubset(bits_ & ~(1ULL << s)); }
  GeneratorSubset complement(std::size_t n) const {
    return GeneratorSubset(all(n).bits_ & ~bits_);
  }
  bool intersects(GeneratorSubset o) const { return (bits_ & o.bits_) != 0; }
  bool subset_of(GeneratorSubset o) const { return (bits_ & ~o.bits_) == 0; }
  std::optional<Gen> least() const {
    if (bits_ == 0) return std::nullopt;
    return static_cast<Gen>(std::countr_zero(bits_));
  }
  std::vector<Gen> members() const;

  friend constexpr bool operator==(GeneratorSubset, GeneratorSubset) = default;

private:
  std::uint64_t bits_ = 0;
};

class CoxeterMatrix {
public:
  CoxeterMatrix() = default;
  // Validates: square, unit diagonal, symmetric, off-diagonal >= 2 or inf.
  CoxeterMatrix(std::size_t n, std::vector<Bond> entries);

  std::size_t size() const { return n_; }
  Bond operator()(std::size_t s, std::size_t t) const { return entries_[s * n_ + t]; }
  const std::vector<Bond>& entries() const { return entries_; }

  friend bool operator==(const CoxeterMatrix&, const CoxeterMatrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<Bond> entries_;
};

class Element {
public:
  Element() = default;

  const Word& word() const { return word_; }
  std::size_t length() const { return word_.size(); }
  bool is_identity() const { return word_.empty(); }
  GeneratorSubset descents(Side side) const {
    return side == Side::Left ? left_ : right_;
  }
  std::uint64_t owner() const { return owner_; }

  friend bool operator==(const Element& a, const Element& b) {
    return a.word_ == b.word_;
  }
  // ShortLex order: length first, then lexicographic on canonical words.
  friend bool operator<(const Element& a, const Element& b) {
    if (a.word_.size() != b.word_.size()) return a.word_.size() < b.word_.size();
    return a.word_ < b.word_;
  }

private:
  friend class CoxeterSystem;
  Element(Word w, GeneratorSubset l, GeneratorSubset r, std::uint64_t owner)
      : word_(std::move(w)), left_(l), right_(r), owner_(owner) {}

  Word word_;
  GeneratorSubset left_, right_;
  std::uint64_t owner_ = 0;
};

std::size_t hash_word(std::span<const Gen> w);

struct ElementHash {
  std::size_t operator()(const Element& e) const { return hash_word(e.word()); }
};

struct SystemOptions {
  // Skip the checked 64-bit path and use arbitrary precision throughout.
  bool force_big_integers = false;
};

class CoxeterSystem {
public:
  // validate_system: throws InputError on malformed matrices, unsupported
  // bonds for the chosen backend, or bad generator names. When no backend is
  // given, crystallographic is chosen iff every bond is in {2,3,4,6,inf}.
  static CoxeterSystem create(CoxeterMatrix matrix,
                              std::vector<std::string> names,
                              std::optional<Backend> backend = std::nullopt,
                              std::string name = {}, SystemOptions opts = {});

  std::size_t rank() const;
  const CoxeterMatrix& matrix() const;
  const std::vector<std::string>& generator_names() const;
  const std::string& name() const;
  Backend backend() const;
  std::uint64_t id() const;

  // Integer Cartan pairing for the crystallographic backend.
  std::int64_t cartan(Gen s, Gen t) const;
  // Cartan value as a coefficient vector over zeta_{2M} (general backend).
  std::vector<std::int64_t> cartan_cyclotomic(Gen s, Gen t) const;
  std::uint32_t cyclotomic_half_order() const;

  Element identity() const;
  std::pair<Element, bool> canonicalize(std::span<const Gen> word) const;
  Element element(std::span<const Gen> word) const {
    return canonicalize(word).first;
  }
  Element multiply(const Element& w, Gen s, Side side) const;
  Element product(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  GeneratorSubset descents(const Element& w, Side side) const;
  bool is_min_rep(const Element& w, GeneratorSubset J, Side side) const;
  Element project(const Element& w, GeneratorSubset J, Side side) const;

  // Lifting walk: left-multiplies u by each letter of `word` that is a left
  // descent of the current value. Returns true iff u reaches the identity.
  // With `word` a reduced word of v this decides u <= v in Bruhat order.
  bool strip_walk(const Element& u, std::span<const Gen> word) const;

  // Elements of length <= radius, ShortLex order. Finite groups stop early.
  std::vector<Element> ball(std::size_t radius) const;

  std::optional<Gen> generator(std::string_view name) const;
  Word parse_word(std::string_view text) const;
  GeneratorSubset parse_subset(std::string_view text) const;
  std::string format_word(std::span<const Gen> word) const;
  std::string format(const Element& w) const { return format_word(w.word()); }
  std::string display(const Element& w) const;
  std::string format_subset(GeneratorSubset J) const;

  void require_owned(const Element& w) const;

  struct Impl;

private:
  explicit CoxeterSystem(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  Element make(Word w) const;

  std::shared_ptr<const Impl> impl_;
};

} // namespace parakl
