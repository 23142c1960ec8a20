#include "laurent.hpp"

#include <algorithm>

#include "errors.hpp"

namespace parakl {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw LimitError("polynomial coefficient overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw LimitError("polynomial coefficient overflow");
  return r;
}

} // namespace

LaurentPoly::LaurentPoly(std::int64_t offset, std::vector<std::int64_t> coeffs)
    : offset_(offset), coeffs_(std::move(coeffs)) {
  normalize();
}

void LaurentPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(),
                            [](std::int64_t c) { return c != 0; });
  offset_ += first - coeffs_.begin();
  coeffs_.erase(coeffs_.begin(), first);
  if (coeffs_.empty()) offset_ = 0;
}

std::int64_t LaurentPoly::coefficient(std::int64_t exp) const {
  const std::int64_t i = exp - offset_;
  if (i < 0 || i >= static_cast<std::int64_t>(coeffs_.size())) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

LaurentPoly LaurentPoly::bar() const {
  if (is_zero()) return {};
  return LaurentPoly(-degree(), {coeffs_.rbegin(), coeffs_.rend()});
}

LaurentPoly LaurentPoly::shifted(std::int64_t k) const {
  if (is_zero()) return {};
  LaurentPoly r = *this;
  r.offset_ += k;
  return r;
}

LaurentPoly LaurentPoly::truncated(std::int64_t lo, std::int64_t hi) const {
  std::vector<std::int64_t> c;
  if (is_zero() || hi < lo) return {};
  const std::int64_t from = std::max(lo, offset_);
  for (std::int64_t e = from; e <= std::min(hi, degree()); ++e) c.push_back(coefficient(e));
  return LaurentPoly(from, std::move(c));
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& c : r.coeffs_) c = checked_mul(c, -1);
  return r;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t lo = std::min(a.offset_, b.offset_);
  const std::int64_t hi = std::max(a.degree(), b.degree());
  std::vector<std::int64_t> c(static_cast<std::size_t>(hi - lo + 1), 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    c[a.offset_ - lo + i] = a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i)
    c[b.offset_ - lo + i] = checked_add(c[b.offset_ - lo + i], b.coeffs_[i]);
  return LaurentPoly(lo, std::move(c));
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<std::int64_t> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      c[i + j] = checked_add(c[i + j], checked_mul(a.coeffs_[i], b.coeffs_[j]));
  return LaurentPoly(a.offset_ + b.offset_, std::move(c));
}

LaurentPoly operator*(std::int64_t k, const LaurentPoly& a) {
  return LaurentPoly::constant(k) * a;
}

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    std::int64_t c = coeffs_[i];
    if (c == 0) continue;
    const std::int64_t e = offset_ + static_cast<std::int64_t>(i);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    const std::uint64_t mag = c < 0 ? 0 - static_cast<std::uint64_t>(c)
                                    : static_cast<std::uint64_t>(c);
    if (e == 0) {
      out += std::to_string(mag);
      continue;
    }
    if (mag != 1) out += std::to_string(mag);
    out += "q";
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

} // namespace parakl
