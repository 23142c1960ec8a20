#include "scalar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <mpfr.h>

#include "errors.hpp"

namespace parakl {

namespace {

// Exact division by a monic integer polynomial; asserts zero remainder.
std::vector<std::int64_t> divide_exact(std::vector<std::int64_t> num,
                                       const std::vector<std::int64_t>& den) {
  const std::size_t dd = den.size() - 1;
  PARAKL_CHECK(den.back() == 1 && num.size() >= den.size());
  std::vector<std::int64_t> quot(num.size() - dd, 0);
  for (std::size_t k = num.size(); k-- > dd;) {
    const std::int64_t c = num[k];
    quot[k - dd] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i <= dd; ++i) num[k - dd + i] -= c * den[i];
  }
  for (std::size_t i = 0; i < dd; ++i) PARAKL_CHECK(num[i] == 0);
  return quot;
}

class MpfrValue {
public:
  explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~MpfrValue() { mpfr_clear(v_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  mpfr_ptr get() { return v_; }

private:
  mpfr_t v_;
};

} // namespace

std::vector<std::int64_t> cyclotomic_polynomial(std::uint32_t n) {
  PARAKL_CHECK(n >= 1);
  std::vector<std::int64_t> p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (std::uint32_t d = 1; d < n; ++d)
    if (n % d == 0) p = divide_exact(std::move(p), cyclotomic_polynomial(d));
  return p;
}

CyclotomicField::CyclotomicField(std::uint32_t half_order)
    : half_order_(half_order) {
  PARAKL_CHECK(half_order >= 1);
  auto phi = cyclotomic_polynomial(2 * half_order);
  phi.pop_back();
  modulus_ = std::move(phi);
  const std::size_t d = modulus_.size();

  const std::uint32_t n = 2 * half_order;
  powers_.reserve(n);
  std::vector<std::int64_t> cur(d, 0);
  cur[0] = 1;
  for (std::uint32_t e = 0; e < n; ++e) {
    powers_.push_back(cur);
    // multiply by x and reduce
    std::vector<std::int64_t> next(d + 1, 0);
    std::copy(cur.begin(), cur.end(), next.begin() + 1);
    reduce(next);
    cur = std::move(next);
  }

  cosines_.resize(d);
  const long double pi = 3.141592653589793238462643383279502884L;
  for (std::size_t k = 0; k < d; ++k)
    cosines_[k] = std::cos(pi * static_cast<long double>(k) / half_order);
}

const std::vector<std::int64_t>& CyclotomicField::power(std::int64_t e) const {
  const std::int64_t n = 2 * static_cast<std::int64_t>(half_order_);
  e %= n;
  if (e < 0) e += n;
  return powers_[static_cast<std::size_t>(e)];
}

std::vector<std::int64_t>
CyclotomicField::two_cos_pi_over(std::uint32_t m) const {
  PARAKL_CHECK(m >= 1 && half_order_ % m == 0);
  const std::int64_t k = half_order_ / m;
  std::vector<std::int64_t> r = power(k);
  const auto& b = power(-k);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

namespace {

template <class I> long double to_ld(const I& v);
template <> long double to_ld(const CheckedInt& v) {
  return static_cast<long double>(v.value());
}
template <> long double to_ld(const BigInt& v) {
  return v.convert_to<long double>();
}

template <class I>
int fast_sign(std::span<const I> coeffs, const std::vector<long double>& cosines,
              bool& decided) {
  long double sum = 0, mass = 0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const long double a = to_ld(coeffs[k]);
    sum += a * cosines[k];
    mass += std::fabs(a);
  }
  // long double carries 64 mantissa bits; the bound is deliberately loose.
  const long double err =
      mass * static_cast<long double>(coeffs.size() + 8) * std::ldexp(1.0L, -58);
  decided = std::fabs(sum) > err;
  return (sum > 0) - (sum < 0);
}

} // namespace

int CyclotomicField::sign(std::span<const CheckedInt> coeffs) const {
  if (std::all_of(coeffs.begin(), coeffs.end(),
                  [](const CheckedInt& c) { return c.is_zero(); }))
    return 0;
  bool decided = false;
  const int s = fast_sign(coeffs, cosines_, decided);
  if (decided) return s;
  std::vector<BigInt> big;
  for (const auto& c : coeffs) big.emplace_back(c.value());
  return refine_sign(big);
}

int CyclotomicField::sign(std::span<const BigInt> coeffs) const {
  if (std::all_of(coeffs.begin(), coeffs.end(),
                  [](const BigInt& c) { return c.is_zero(); }))
    return 0;
  bool decided = false;
  const int s = fast_sign(coeffs, cosines_, decided);
  if (decided) return s;
  return refine_sign({coeffs.begin(), coeffs.end()});
}

// Interval refinement: the value is a nonzero algebraic number (the exact
// zero test already ran), so some finite precision separates it from 0.
int CyclotomicField::refine_sign(const std::vector<BigInt>& coeffs) const {
  std::size_t coeff_bits = 1;
  BigInt mass = 0;
  for (const auto& c : coeffs) {
    BigInt a = abs(c);
    mass += a;
    if (!a.is_zero())
      coeff_bits = std::max<std::size_t>(coeff_bits, msb(a) + 1);
  }
  const std::size_t mass_bits = mass.is_zero() ? 1 : msb(mass) + 1;

  for (mpfr_prec_t prec = 128; prec <= (1 << 20); prec *= 2) {
    const mpfr_prec_t work = prec + static_cast<mpfr_prec_t>(coeff_bits) + 16;
    MpfrValue angle(work), term(work), sum(work), coeff(work), pi(work);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    mpfr_set_zero(sum.get(), 1);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k].is_zero()) continue;
      mpfr_mul_ui(angle.get(), pi.get(), static_cast<unsigned long>(k), MPFR_RNDN);
      mpfr_div_ui(angle.get(), angle.get(), half_order_, MPFR_RNDN);
      mpfr_cos(term.get(), angle.get(), MPFR_RNDN);
      const std::string digits = coeffs[k].str();
      mpfr_set_str(coeff.get(), digits.c_str(), 10, MPFR_RNDN);
      mpfr_mul(term.get(), term.get(), coeff.get(), MPFR_RNDN);
      mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
    }
    // |error| <= mass * (k + 16) * 2^-prec, compared through exponents.
    if (mpfr_zero_p(sum.get())) continue;
    const long exp = mpfr_get_exp(sum.get()); // |sum| >= 2^(exp-1)
    const long err_exp = static_cast<long>(mass_bits) +
                         static_cast<long>(std::bit_width(coeffs.size() + 16)) -
                         static_cast<long>(prec);
    if (exp - 1 > err_exp) return mpfr_sgn(sum.get());
  }
  throw InternalError("sign refinement did not converge");
}

} // namespace parakl
