#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace parakl {

// Integer Laurent polynomial sum coeffs[i] q^(offset+i). Normalized: the zero
// polynomial has no coefficients and offset 0; otherwise both ends are
// nonzero. Arithmetic is checked and throws LimitError on overflow.
class LaurentPoly {
public:
  LaurentPoly() = default;
  LaurentPoly(std::int64_t offset, std::vector<std::int64_t> coeffs);

  static LaurentPoly constant(std::int64_t c) { return LaurentPoly(0, {c}); }
  static LaurentPoly monomial(std::int64_t c, std::int64_t exp) {
    return LaurentPoly(exp, {c});
  }
  static LaurentPoly q() { return monomial(1, 1); }

  std::int64_t offset() const { return offset_; }
  const std::vector<std::int64_t>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  // Highest exponent; undefined for zero.
  std::int64_t degree() const { return offset_ + static_cast<std::int64_t>(coeffs_.size()) - 1; }
  std::int64_t coefficient(std::int64_t exp) const;

  // q -> q^{-1}
  LaurentPoly bar() const;
  LaurentPoly shifted(std::int64_t k) const; // times q^k
  // Terms with exponent in [lo, hi].
  LaurentPoly truncated(std::int64_t lo, std::int64_t hi) const;

  LaurentPoly operator-() const;
  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(std::int64_t c, const LaurentPoly& a);
  LaurentPoly& operator+=(const LaurentPoly& b) { return *this = *this + b; }
  LaurentPoly& operator-=(const LaurentPoly& b) { return *this = *this - b; }

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  // "1 + q^2", "-q^-1 + 3q", "0".
  std::string to_string() const;

private:
  void normalize();

  std::int64_t offset_ = 0;
  std::vector<std::int64_t> coeffs_;
};

} // namespace parakl
