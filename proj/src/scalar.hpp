#pragma once

// Exact scalars for the reflection representation.
//
// Two families are provided: plain integers (crystallographic systems, bonds
// in {2,3,4,6,inf}) and elements of the real cyclotomic ring Z[2cos(pi/M)]
// embedded in Z[zeta_{2M}] (arbitrary finite bonds). Both come in a checked
// 64-bit flavour that throws ScalarOverflow and an arbitrary-precision flavour.

#include <cstddef>
#include <bit>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace parakl {

using BigInt = boost::multiprecision::cpp_int;

struct ScalarOverflow : std::exception {
  const char* what() const noexcept override { return "scalar overflow"; }
};

class CheckedInt {
public:
  constexpr CheckedInt(std::int64_t v = 0) : v_(v) {}

  std::int64_t value() const { return v_; }
  int sign() const { return (v_ > 0) - (v_ < 0); }
  bool is_zero() const { return v_ == 0; }

  friend CheckedInt operator+(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw ScalarOverflow{};
    return r;
  }
  friend CheckedInt operator-(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw ScalarOverflow{};
    return r;
  }
  friend CheckedInt operator*(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw ScalarOverflow{};
    return r;
  }
  CheckedInt operator-() const { return CheckedInt(0) - *this; }
  CheckedInt& operator+=(CheckedInt b) { return *this = *this + b; }
  CheckedInt& operator-=(CheckedInt b) { return *this = *this - b; }
  friend bool operator==(CheckedInt a, CheckedInt b) { return a.v_ == b.v_; }

private:
  std::int64_t v_;
};

inline int sign_of(const CheckedInt& v) { return v.sign(); }
inline int sign_of(const BigInt& v) { return v.sign(); }
inline bool is_zero(const CheckedInt& v) { return v.is_zero(); }
inline bool is_zero(const BigInt& v) { return v.is_zero(); }
inline bool is_zero(std::int64_t v) { return v == 0; }

// Z[zeta] with zeta = exp(i*pi/M), stored modulo the cyclotomic polynomial
// Phi_{2M}. Coefficient vectors always have length degree().
class CyclotomicField {
public:
  explicit CyclotomicField(std::uint32_t half_order);

  std::uint32_t half_order() const { return half_order_; }
  std::size_t degree() const { return modulus_.size(); }

  // Low coefficients of the monic modulus: Phi(x) = x^d + sum modulus[i] x^i.
  const std::vector<std::int64_t>& modulus() const { return modulus_; }

  // zeta^e reduced, e taken modulo 2M.
  const std::vector<std::int64_t>& power(std::int64_t e) const;

  // 2cos(pi/m) as a reduced coefficient vector; m must divide M.
  std::vector<std::int64_t> two_cos_pi_over(std::uint32_t m) const;

  // Reduce a product vector of any length to degree() coefficients.
  template <class I> void reduce(std::vector<I>& coeffs) const {
    const std::size_t d = degree();
    for (std::size_t k = coeffs.size(); k-- > d;) {
      if (is_zero(coeffs[k])) continue;
      const I c = coeffs[k];
      for (std::size_t i = 0; i < d; ++i)
        if (modulus_[i] != 0) coeffs[k - d + i] = coeffs[k - d + i] - c * I(modulus_[i]);
      coeffs[k] = I(0);
    }
    coeffs.resize(d);
  }

  // Exact sign of the real number sum coeffs[k] * zeta^k. The caller
  // guarantees that the value is real (it is, for every root coordinate).
  int sign(std::span<const CheckedInt> coeffs) const;
  int sign(std::span<const BigInt> coeffs) const;

private:
  int refine_sign(const std::vector<BigInt>& coeffs) const;

  std::uint32_t half_order_;
  std::vector<std::int64_t> modulus_;
  std::vector<std::vector<std::int64_t>> powers_;
  std::vector<long double> cosines_;
};

// Integer cyclotomic polynomial Phi_n, coefficients in ascending order.
std::vector<std::int64_t> cyclotomic_polynomial(std::uint32_t n);

} // namespace parakl
