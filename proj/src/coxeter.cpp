#include "coxeter.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <numeric>
#include <unordered_set>

#include "errors.hpp"
#include "scalar.hpp"

namespace parakl {

const char* backend_name(Backend b) {
  return b == Backend::Crystallographic ? "crystallographic" : "general";
}

std::optional<Backend> parse_backend(std::string_view s) {
  if (s == "crystallographic") return Backend::Crystallographic;
  if (s == "general") return Backend::General;
  return std::nullopt;
}

std::vector<Gen> GeneratorSubset::members() const {
  std::vector<Gen> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1)
    out.push_back(static_cast<Gen>(std::countr_zero(b)));
  return out;
}

std::size_t hash_word(std::span<const Gen> w) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Gen g : w) {
    h ^= g;
    h *= 0x100000001b3ULL;
  }
  h ^= w.size();
  h *= 0x100000001b3ULL;
  return static_cast<std::size_t>(h);
}

CoxeterMatrix::CoxeterMatrix(std::size_t n, std::vector<Bond> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n == 0) throw InputError("Coxeter matrix must have at least one generator");
  if (n > kMaxGenerators) throw InputError("too many generators (max 64)");
  if (entries_.size() != n * n) throw InputError("Coxeter matrix is not square");
  for (std::size_t s = 0; s < n; ++s) {
    if ((*this)(s, s) != 1)
      throw InputError("Coxeter matrix diagonal entry m(" + std::to_string(s) +
                       "," + std::to_string(s) + ") must be 1");
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t) continue;
      if ((*this)(s, t) != (*this)(t, s))
        throw InputError("Coxeter matrix is asymmetric at (" + std::to_string(s) +
                         "," + std::to_string(t) + ")");
      const Bond m = (*this)(s, t);
      if (m != kInfinity && m < 2)
        throw InputError("off-diagonal Coxeter matrix entry must be >= 2 or inf");
    }
  }
}

namespace {

// ---------------------------------------------------------------------------
// Scalar rings used by the root kernel.

template <class I> class IntegerRing {
public:
  using Value = I;

  IntegerRing(std::size_t n, const std::vector<std::int64_t>& cartan)
      : n_(n), cartan_(cartan) {}

  std::size_t rank() const { return n_; }
  Value zero() const { return I(0); }
  Value one() const { return I(1); }
  bool bonded(std::size_t t, std::size_t j) const { return cartan_[t * n_ + j] != 0; }
  void sub_scaled(Value& acc, std::size_t t, std::size_t j, const Value& b) const {
    acc = acc - I(cartan_[t * n_ + j]) * b;
  }
  void negate(Value& v) const { v = -v; }
  bool zero_p(const Value& v) const { return is_zero(v); }
  int sign(const Value& v) const { return sign_of(v); }

private:
  std::size_t n_;
  std::vector<std::int64_t> cartan_;
};

template <class I> class CyclotomicRing {
public:
  using Value = std::vector<I>;

  CyclotomicRing(std::size_t n, const CyclotomicField* field,
                 const std::vector<std::vector<std::int64_t>>& cartan)
      : n_(n), field_(field), cartan_(cartan) {}

  std::size_t rank() const { return n_; }
  Value zero() const { return Value(field_->degree(), I(0)); }
  Value one() const {
    Value v = zero();
    v[0] = I(1);
    return v;
  }
  bool bonded(std::size_t t, std::size_t j) const {
    const auto& c = cartan_[t * n_ + j];
    return std::any_of(c.begin(), c.end(), [](std::int64_t x) { return x != 0; });
  }
  void sub_scaled(Value& acc, std::size_t t, std::size_t j, const Value& b) const {
    const auto& c = cartan_[t * n_ + j];
    const std::size_t d = field_->degree();
    Value prod(2 * d - 1, I(0));
    for (std::size_t i = 0; i < d; ++i) {
      if (c[i] == 0) continue;
      for (std::size_t k = 0; k < d; ++k)
        if (!is_zero(b[k])) prod[i + k] = prod[i + k] + I(c[i]) * b[k];
    }
    field_->reduce(prod);
    for (std::size_t i = 0; i < d; ++i) acc[i] = acc[i] - prod[i];
  }
  void negate(Value& v) const {
    for (auto& x : v) x = -x;
  }
  bool zero_p(const Value& v) const {
    return std::all_of(v.begin(), v.end(), [](const I& x) { return is_zero(x); });
  }
  int sign(const Value& v) const { return field_->sign(std::span<const I>(v)); }

private:
  std::size_t n_;
  const CyclotomicField* field_;
  std::vector<std::vector<std::int64_t>> cartan_;
};

// Matrix of a group element in the basis of simple roots. Reflection s acts
// by s(alpha_j) = alpha_j - cartan(s,j) alpha_s.
template <class Ring> class RootMatrix {
public:
  using Value = typename Ring::Value;

  explicit RootMatrix(const Ring& ring)
      : ring_(ring), n_(ring.rank()), m_(n_ * n_, ring.zero()) {
    for (std::size_t i = 0; i < n_; ++i) at(i, i) = ring.one();
  }

  Value& at(std::size_t i, std::size_t j) { return m_[i * n_ + j]; }

  // M <- S_s M (touches row s only).
  void left_reflect(Gen s) {
    for (std::size_t k = 0; k < n_; ++k) {
      Value v = at(s, k);
      ring_.negate(v);
      for (std::size_t j = 0; j < n_; ++j)
        if (j != s && ring_.bonded(s, j)) ring_.sub_scaled(v, s, j, at(j, k));
      at(s, k) = std::move(v);
    }
  }

  // M <- M S_s (column j picks up -cartan(s,j) times column s).
  void right_reflect(Gen s) {
    for (std::size_t i = 0; i < n_; ++i) {
      Value col = at(i, s);
      for (std::size_t j = 0; j < n_; ++j)
        if (j != s && ring_.bonded(s, j)) ring_.sub_scaled(at(i, j), s, j, col);
      ring_.negate(col);
      at(i, s) = std::move(col);
    }
  }

  // Column s is the image of alpha_s, a root; its sign is that of any
  // nonzero coordinate.
  bool column_negative(Gen s) {
    for (std::size_t i = 0; i < n_; ++i) {
      const Value& v = at(i, s);
      if (!ring_.zero_p(v)) return ring_.sign(v) < 0;
    }
    internal_check_failed("zero root vector");
  }

  GeneratorSubset negative_columns() {
    std::uint64_t bits = 0;
    for (std::size_t s = 0; s < n_; ++s)
      if (column_negative(static_cast<Gen>(s))) bits |= 1ULL << s;
    return GeneratorSubset(bits);
  }

private:
  const Ring& ring_;
  std::size_t n_;
  std::vector<Value> m_;
};

// Matrix of w^{-1} for w given by `word`.
template <class Ring>
RootMatrix<Ring> inverse_matrix(const Ring& ring, std::span<const Gen> word) {
  RootMatrix<Ring> m(ring);
  for (Gen g : word) m.left_reflect(g);
  return m;
}

template <class Ring>
RootMatrix<Ring> direct_matrix(const Ring& ring, std::span<const Gen> word) {
  RootMatrix<Ring> m(ring);
  for (Gen g : word) m.right_reflect(g);
  return m;
}

struct Canonical {
  Word word;
  GeneratorSubset left, right;
};

template <class Ring>
Canonical canonicalize_with(const Ring& ring, std::span<const Gen> word) {
  Canonical out;
  auto inv = inverse_matrix(ring, word);
  auto dir = direct_matrix(ring, word);
  out.right = dir.negative_columns();
  out.left = inv.negative_columns();

  // Greedy extraction of the least left descent.
  GeneratorSubset desc = out.left;
  while (auto s = desc.least()) {
    PARAKL_CHECK(out.word.size() < word.size());
    out.word.push_back(*s);
    inv.right_reflect(*s);
    desc = inv.negative_columns();
  }
  return out;
}

template <class Ring>
bool strip_walk_with(const Ring& ring, std::span<const Gen> u, std::span<const Gen> v) {
  auto inv = inverse_matrix(ring, u);
  std::size_t len = u.size();
  for (std::size_t i = 0; i < v.size() && len > 0; ++i) {
    if (v.size() - i < len) return false;
    const Gen s = v[i];
    if (inv.column_negative(s)) {
      inv.right_reflect(s);
      --len;
    }
  }
  return len == 0;
}

std::atomic<std::uint64_t> next_system_id{1};

std::uint32_t lcm_of_bonds(const CoxeterMatrix& m) {
  std::uint32_t l = 1;
  for (Bond b : m.entries())
    if (b != kInfinity && b >= 3) l = std::lcm(l, b);
  return l;
}

bool crystallographic_bond(Bond b) {
  return b == 1 || b == 2 || b == 3 || b == 4 || b == 6 || b == kInfinity;
}

} // namespace

struct CoxeterSystem::Impl {
  std::uint64_t id = 0;
  std::string name;
  CoxeterMatrix matrix;
  std::vector<std::string> names;
  Backend backend = Backend::Crystallographic;
  SystemOptions opts;

  std::vector<std::int64_t> cartan;                         // crystallographic
  std::unique_ptr<CyclotomicField> field;                   // general
  std::vector<std::vector<std::int64_t>> cartan_cyclotomic; // general

  std::optional<IntegerRing<CheckedInt>> int_small;
  std::optional<IntegerRing<BigInt>> int_big;
  std::optional<CyclotomicRing<CheckedInt>> cyc_small;
  std::optional<CyclotomicRing<BigInt>> cyc_big;

  // Root coordinates of words longer than this always use big integers.
  static constexpr std::size_t kFixedWidthLimit = 32;

  template <class F> auto dispatch(std::size_t work_length, F&& f) const {
    const bool small = !opts.force_big_integers && work_length <= kFixedWidthLimit;
    if (backend == Backend::Crystallographic) {
      if (small) {
        try {
          return f(*int_small);
        } catch (const ScalarOverflow&) {
        }
      }
      return f(*int_big);
    }
    if (small) {
      try {
        return f(*cyc_small);
      } catch (const ScalarOverflow&) {
      }
    }
    return f(*cyc_big);
  }
};

CoxeterSystem CoxeterSystem::create(CoxeterMatrix matrix,
                                    std::vector<std::string> names,
                                    std::optional<Backend> backend,
                                    std::string name, SystemOptions opts) {
  const std::size_t n = matrix.size();
  if (n == 0) throw InputError("empty Coxeter matrix");
  if (names.size() != n)
    throw InputError("generator list has " + std::to_string(names.size()) +
                     " names but the matrix has size " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nm = names[i];
    if (nm.empty()) throw InputError("empty generator name");
    for (char c : nm)
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '=')
        throw InputError("generator name '" + nm +
                         "' contains whitespace, ',' or '='");
    if (nm == "e") throw InputError("'e' is reserved for the identity");
    for (std::size_t j = 0; j < i; ++j)
      if (names[j] == nm) throw InputError("duplicate generator name '" + nm + "'");
  }

  bool all_cryst = true;
  for (Bond b : matrix.entries()) all_cryst = all_cryst && crystallographic_bond(b);
  const Backend chosen =
      backend.value_or(all_cryst ? Backend::Crystallographic : Backend::General);
  if (chosen == Backend::Crystallographic && !all_cryst)
    throw InputError(
        "crystallographic backend supports only bonds in {2,3,4,6,inf}");

  auto impl = std::make_shared<Impl>();
  impl->id = next_system_id.fetch_add(1);
  impl->name = std::move(name);
  impl->matrix = std::move(matrix);
  impl->names = std::move(names);
  impl->backend = chosen;
  impl->opts = opts;
  const auto& m = impl->matrix;

  if (chosen == Backend::Crystallographic) {
    impl->cartan.assign(n * n, 0);
    for (std::size_t s = 0; s < n; ++s) {
      impl->cartan[s * n + s] = 2;
      for (std::size_t t = s + 1; t < n; ++t) {
        std::int64_t a = 0, b = 0; // cartan(s,t), cartan(t,s) for s < t
        switch (m(s, t)) {
        case 2: break;
        case 3: a = -1; b = -1; break;
        case 4: a = -1; b = -2; break;
        case 6: a = -1; b = -3; break;
        case kInfinity: a = -2; b = -2; break;
        default: internal_check_failed("unexpected crystallographic bond");
        }
        impl->cartan[s * n + t] = a;
        impl->cartan[t * n + s] = b;
      }
    }
    impl->int_small.emplace(n, impl->cartan);
    impl->int_big.emplace(n, impl->cartan);
  } else {
    impl->field = std::make_unique<CyclotomicField>(lcm_of_bonds(m));
    const auto& f = *impl->field;
    const std::size_t d = f.degree();
    impl->cartan_cyclotomic.assign(n * n, std::vector<std::int64_t>(d, 0));
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) {
        auto& c = impl->cartan_cyclotomic[s * n + t];
        const Bond b = m(s, t);
        if (s == t) {
          c[0] = 2;
        } else if (b == kInfinity) {
          c[0] = -2;
        } else if (b >= 3) {
          c = f.two_cos_pi_over(b);
          for (auto& x : c) x = -x;
        }
      }
    impl->cyc_small.emplace(n, impl->field.get(), impl->cartan_cyclotomic);
    impl->cyc_big.emplace(n, impl->field.get(), impl->cartan_cyclotomic);
  }
  return CoxeterSystem(std::move(impl));
}

std::size_t CoxeterSystem::rank() const { return impl_->matrix.size(); }
const CoxeterMatrix& CoxeterSystem::matrix() const { return impl_->matrix; }
const std::vector<std::string>& CoxeterSystem::generator_names() const {
  return impl_->names;
}
const std::string& CoxeterSystem::name() const { return impl_->name; }
Backend CoxeterSystem::backend() const { return impl_->backend; }
std::uint64_t CoxeterSystem::id() const { return impl_->id; }

std::int64_t CoxeterSystem::cartan(Gen s, Gen t) const {
  PARAKL_CHECK(impl_->backend == Backend::Crystallographic);
  return impl_->cartan[s * rank() + t];
}

std::vector<std::int64_t> CoxeterSystem::cartan_cyclotomic(Gen s, Gen t) const {
  PARAKL_CHECK(impl_->backend == Backend::General);
  return impl_->cartan_cyclotomic[s * rank() + t];
}

std::uint32_t CoxeterSystem::cyclotomic_half_order() const {
  return impl_->field ? impl_->field->half_order() : 1;
}

void CoxeterSystem::require_owned(const Element& w) const {
  if (w.owner() != impl_->id)
    throw InputError("element belongs to a different Coxeter system");
}

Element CoxeterSystem::identity() const { return Element({}, {}, {}, impl_->id); }

std::pair<Element, bool> CoxeterSystem::canonicalize(std::span<const Gen> word) const {
  for (Gen g : word)
    if (g >= rank()) throw InputError("generator index out of range");
  if (word.empty()) return {identity(), true};
  auto c = impl_->dispatch(word.size(), [&](const auto& ring) {
    return canonicalize_with(ring, word);
  });
  const bool reduced = c.word.size() == word.size();
  return {Element(std::move(c.word), c.left, c.right, impl_->id), reduced};
}

Element CoxeterSystem::make(Word w) const { return canonicalize(w).first; }

Element CoxeterSystem::multiply(const Element& w, Gen s, Side side) const {
  require_owned(w);
  if (s >= rank()) throw InputError("generator index out of range");
  Word word;
  word.reserve(w.length() + 1);
  if (side == Side::Left) word.push_back(s);
  word.insert(word.end(), w.word().begin(), w.word().end());
  if (side == Side::Right) word.push_back(s);
  return make(std::move(word));
}

Element CoxeterSystem::product(const Element& a, const Element& b) const {
  require_owned(a);
  require_owned(b);
  Word word = a.word();
  word.insert(word.end(), b.word().begin(), b.word().end());
  return make(std::move(word));
}

Element CoxeterSystem::inverse(const Element& a) const {
  require_owned(a);
  Word word(a.word().rbegin(), a.word().rend());
  return make(std::move(word));
}

GeneratorSubset CoxeterSystem::descents(const Element& w, Side side) const {
  require_owned(w);
  return w.descents(side);
}

bool CoxeterSystem::is_min_rep(const Element& w, GeneratorSubset J, Side side) const {
  return !descents(w, side).intersects(J);
}

Element CoxeterSystem::project(const Element& w, GeneratorSubset J, Side side) const {
  Element cur = w;
  while (auto s = GeneratorSubset(descents(cur, side).bits() & J.bits()).least())
    cur = multiply(cur, *s, side);
  return cur;
}

bool CoxeterSystem::strip_walk(const Element& u, std::span<const Gen> word) const {
  require_owned(u);
  if (u.length() > word.size()) return false;
  if (u.is_identity()) return true;
  return impl_->dispatch(u.length() + word.size(), [&](const auto& ring) {
    return strip_walk_with(ring, u.word(), word);
  });
}

std::vector<Element> CoxeterSystem::ball(std::size_t radius) const {
  std::vector<Element> out{identity()};
  std::vector<Element> level{identity()};
  for (std::size_t len = 1; len <= radius && !level.empty(); ++len) {
    std::unordered_set<Element, ElementHash> seen;
    std::vector<Element> next;
    for (const auto& w : level)
      for (Gen s = 0; s < rank(); ++s) {
        if (w.descents(Side::Right).contains(s)) continue;
        Element ws = multiply(w, s, Side::Right);
        if (seen.insert(ws).second) next.push_back(std::move(ws));
      }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

std::optional<Gen> CoxeterSystem::generator(std::string_view name) const {
  for (std::size_t i = 0; i < rank(); ++i)
    if (impl_->names[i] == name) return static_cast<Gen>(i);
  return std::nullopt;
}

namespace {
std::vector<std::string_view> tokenize(std::string_view text, bool commas) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto sep = [&](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || (commas && c == ',');
  };
  while (i < text.size()) {
    while (i < text.size() && sep(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !sep(text[j])) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}
} // namespace

Word CoxeterSystem::parse_word(std::string_view text) const {
  Word w;
  for (auto tok : tokenize(text, false)) {
    if (tok == "e") continue;
    auto g = generator(tok);
    if (!g) throw InputError("unknown generator '" + std::string(tok) + "'");
    w.push_back(*g);
  }
  return w;
}

GeneratorSubset CoxeterSystem::parse_subset(std::string_view text) const {
  GeneratorSubset J;
  for (auto tok : tokenize(text, true)) {
    auto g = generator(tok);
    if (!g) throw InputError("unknown generator '" + std::string(tok) + "'");
    J = J.with(*g);
  }
  return J;
}

std::string CoxeterSystem::format_word(std::span<const Gen> word) const {
  std::string out;
  for (Gen g : word) {
    if (!out.empty()) out += ' ';
    out += impl_->names.at(g);
  }
  return out;
}

std::string CoxeterSystem::display(const Element& w) const {
  return w.is_identity() ? "e" : format(w);
}

std::string CoxeterSystem::format_subset(GeneratorSubset J) const {
  std::string out;
  for (Gen g : J.members()) {
    if (!out.empty()) out += ',';
    out += impl_->names.at(g);
  }
  return out;
}

} // namespace parakl
