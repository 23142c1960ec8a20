#include "extension.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "errors.hpp"

namespace parakl {

ClassX::ClassX(std::set<Bond> values) : values_(std::move(values)) {
  if (values_.empty()) throw InputError("class X must be nonempty");
  for (Bond b : values_)
    if (b != kInfinity && b < 3) throw InputError("class X values must be >= 3 or inf");
}

ClassX ClassX::parse(std::string_view text) {
  std::set<Bond> vals;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = text.find(',', i);
    if (j == std::string_view::npos) j = text.size();
    auto tok = text.substr(i, j - i);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front())))
      tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back())))
      tok.remove_suffix(1);
    if (!tok.empty()) vals.insert(parse_bond(tok));
    i = j + 1;
  }
  return ClassX(std::move(vals));
}

Bond ClassX::preferred() const {
  if (contains(3)) return 3;
  for (Bond b : values_)
    if (b != kInfinity) return b;
  return kInfinity;
}

std::string ClassX::to_string() const {
  std::string out;
  for (Bond b : values_)
    if (b != kInfinity) out += (out.empty() ? "" : ",") + format_bond(b);
  if (contains(kInfinity)) out += out.empty() ? "inf" : ",inf";
  return out;
}

bool is_class_x(const CoxeterMatrix& m, const ClassX& X) {
  for (std::size_t s = 0; s < m.size(); ++s)
    for (std::size_t t = 0; t < m.size(); ++t)
      if (s != t && m(s, t) != 2 && !X.contains(m(s, t))) return false;
  return true;
}

std::string format_bond(Bond b) { return b == kInfinity ? "inf" : std::to_string(b); }

Bond parse_bond(std::string_view text) {
  if (text == "inf") return kInfinity;
  Bond v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v == 0)
    throw InputError("invalid Coxeter bond '" + std::string(text) + "'");
  return v;
}

ExtensionPolicy parse_policy(const CoxeterSystem& sys, std::string_view text) {
  ExtensionPolicy out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = text.find(',', i);
    if (j == std::string_view::npos) j = text.size();
    std::string_view item = text.substr(i, j - i);
    i = j + 1;
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
      item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
      item.remove_suffix(1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw InputError("policy entry '" + std::string(item) + "' must look like s1=3");
    auto g = sys.generator(item.substr(0, eq));
    if (!g) throw InputError("unknown generator in policy: '" +
                             std::string(item.substr(0, eq)) + "'");
    out[*g] = parse_bond(item.substr(eq + 1));
  }
  return out;
}

namespace {

std::string fresh_name(const CoxeterSystem& sys) {
  std::string cand = "s" + std::to_string(sys.rank() + 1);
  if (!sys.generator(cand)) return cand;
  cand = "s~";
  while (sys.generator(cand)) cand += "~";
  return cand;
}

bool crystallographic_bond(Bond b) {
  return b == 2 || b == 3 || b == 4 || b == 6 || b == kInfinity;
}

} // namespace

ExtendedSystem extend_system(const CoxeterSystem& sys, GeneratorSubset J,
                             const ExtensionPolicy& policy, const std::optional<ClassX>& X) {
  const std::size_t n = sys.rank();
  if (!J.subset_of(GeneratorSubset::all(n)))
    throw InputError("quotient subset contains unknown generators");
  if (n + 1 > kMaxGenerators) throw InputError("too many generators to extend");

  ExtendedSystem ext{sys, J, static_cast<Gen>(n), sys, {}};
  for (const auto& [s, b] : policy) {
    if (J.contains(s))
      throw InputError("policy assigns a bond to " + sys.generator_names()[s] +
                       ", which lies in J and must commute with the new generator");
    if (b == 2)
      throw InputError("policy assigns 2 to " + sys.generator_names()[s] +
                       "; generators outside J must not commute with the new generator");
    if (b != kInfinity && b < 3)
      throw InputError("policy bonds must be >= 3 or inf");
    if (X && !X->contains(b))
      throw InputError("policy bond " + format_bond(b) + " for " +
                       sys.generator_names()[s] + " lies outside class X {" +
                       X->to_string() + "}");
  }
  const Bond fallback = X ? X->preferred() : Bond{3};
  for (Gen s = 0; s < n; ++s) {
    if (J.contains(s)) continue;
    auto it = policy.find(s);
    ext.policy[s] = it != policy.end() ? it->second : fallback;
  }

  std::vector<Bond> entries((n + 1) * (n + 1), 2);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) entries[s * (n + 1) + t] = sys.matrix()(s, t);
  entries[n * (n + 1) + n] = 1;
  for (const auto& [s, b] : ext.policy) {
    entries[s * (n + 1) + n] = b;
    entries[n * (n + 1) + s] = b;
  }
  if (sys.backend() == Backend::Crystallographic)
    for (const auto& [s, b] : ext.policy)
      if (!crystallographic_bond(b))
        throw InputError("bond " + format_bond(b) +
                         " is not supported by the crystallographic backend");

  auto names = sys.generator_names();
  names.push_back(fresh_name(sys));
  std::string name = sys.name().empty() ? std::string("extended") : sys.name() + "~";
  ext.extended = CoxeterSystem::create(CoxeterMatrix(n + 1, std::move(entries)),
                                       std::move(names), sys.backend(), std::move(name));

  const auto& m2 = ext.extended.matrix();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) PARAKL_CHECK(m2(s, t) == sys.matrix()(s, t));
    if (J.contains(static_cast<Gen>(s)))
      PARAKL_CHECK(m2(n, s) == 2);
    else
      PARAKL_CHECK(m2(n, s) != 2);
  }
  return ext;
}

Element lift(const ExtendedSystem& ext, const Element& z) {
  ext.base.require_owned(z);
  Word w = z.word();
  w.push_back(ext.stilde);
  Element out = ext.extended.element(w);
  PARAKL_CHECK(out.length() == z.length() + 1);
  return out;
}

LiftedInterval lift_interval(const ExtendedSystem& ext, const Element& u, const Element& v,
                             const IntervalOptions& opts) {
  IntervalPoset source = parabolic_interval(ext.base, u, v, ext.J, opts);
  const Element lu = lift(ext, u);
  const Element lv = lift(ext, v);
  IntervalOptions lifted_opts = opts;
  lifted_opts.max_length = opts.max_length + 1;
  IntervalPoset target =
      parabolic_interval(ext.extended, lu, lv, ext.base_generators(), lifted_opts);

  if (target.size() != source.size())
    throw InternalError("lifted interval has " + std::to_string(target.size()) +
                        " elements, expected " + std::to_string(source.size()));
  std::vector<std::uint32_t> map(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    const Element lz = lift(ext, source.ground[i]);
    auto it = std::lower_bound(target.ground.begin(), target.ground.end(), lz);
    if (it == target.ground.end() || !(*it == lz))
      throw InternalError("lift of an interval element fell outside the lifted interval");
    map[i] = static_cast<std::uint32_t>(it - target.ground.begin());
    if (source.marked[i] != target.marked[map[i]])
      throw InternalError("lift does not carry [u,v]^J onto [us~,vs~]^S");
  }
  IsoWitness w{std::move(source), target, std::move(map), true};
  if (!verify_witness(w)) throw InternalError("lift is not a poset isomorphism");
  return {std::move(target), std::move(w)};
}

ReductionReport verify_reduction(const ExtendedSystem& ext, KLEngine& base,
                                 KLEngine& extended, const Element& u, const Element& v) {
  if (!ext.base.is_min_rep(u, ext.J, Side::Right) ||
      !ext.base.is_min_rep(v, ext.J, Side::Right))
    throw PreconditionError("reduction endpoints must lie in W^J");
  if (!bruhat_leq(ext.base, u, v)) throw PreconditionError("reduction requires u <= v");

  const Element lu = lift(ext, u);
  const Element lv = lift(ext, v);
  const GeneratorSubset S = ext.base_generators();
  ReductionReport rep;
  rep.pairs = 1;
  for (PolyKind kind : {PolyKind::P, PolyKind::R})
    for (KLType x : {KLType::Q, KLType::MinusOne}) {
      ReductionRecord r{u, v, kind, x, {}, {}, true, true};
      if (kind == PolyKind::P) {
        r.lhs = base.parabolic_kl(u, v, ext.J, x);
        r.rhs = extended.parabolic_kl(lu, lv, S, x);
        r.paths_agree = r.lhs == base.parabolic_kl_duality(u, v, ext.J, x) &&
                        r.rhs == extended.parabolic_kl_duality(lu, lv, S, x);
      } else {
        r.lhs = base.parabolic_r(u, v, ext.J, x);
        r.rhs = extended.parabolic_r(lu, lv, S, x);
      }
      r.equal = r.paths_agree && r.lhs == r.rhs;
      (r.equal ? rep.equal : rep.unequal) += 1;
      rep.records.push_back(std::move(r));
    }
  return rep;
}

ReductionReport verify_reduction_all(const ExtendedSystem& ext, KLEngine& base,
                                     KLEngine& extended, std::size_t max_length) {
  std::vector<Element> quotient;
  for (auto& w : ext.base.ball(max_length))
    if (ext.base.is_min_rep(w, ext.J, Side::Right)) quotient.push_back(std::move(w));
  ReductionReport all;
  for (const auto& v : quotient)
    for (const auto& u : quotient) {
      if (u.length() > v.length() || !bruhat_leq(ext.base, u, v)) continue;
      auto r = verify_reduction(ext, base, extended, u, v);
      all.pairs += r.pairs;
      all.equal += r.equal;
      all.unequal += r.unequal;
      for (auto& rec : r.records) all.records.push_back(std::move(rec));
    }
  return all;
}

} // namespace parakl
