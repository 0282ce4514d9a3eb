#include "rw/bigint.hpp"

#include <algorithm>
#include <cmath>

namespace rw {

BigInt::BigInt(long long v) {
  if (v == 0) return;
  unsigned long long m;
  if (v < 0) {
    neg_ = true;
    m = static_cast<unsigned long long>(-(v + 1)) + 1ULL;
  } else {
    m = static_cast<unsigned long long>(v);
  }
  while (m) {
    limbs_.push_back(static_cast<std::uint32_t>(m & 0xffffffffULL));
    m >>= 32;
  }
}

BigInt BigInt::from_uint64(std::uint64_t v) {
  BigInt r;
  while (v) {
    r.limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
    v >>= 32;
  }
  return r;
}

BigInt::BigInt(const std::string& decimal) {
  size_t i = 0;
  bool neg = false;
  if (i < decimal.size() && (decimal[i] == '-' || decimal[i] == '+')) {
    neg = decimal[i] == '-';
    ++i;
  }
  if (i >= decimal.size()) throw std::invalid_argument("BigInt: empty numeral");
  BigInt acc;
  const BigInt ten(10);
  for (; i < decimal.size(); ++i) {
    char c = decimal[i];
    if (c < '0' || c > '9') throw std::invalid_argument("BigInt: bad digit");
    acc = acc * ten + BigInt(c - '0');
  }
  acc.neg_ = neg && !acc.is_zero();
  *this = acc;
}

void BigInt::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  if (limbs_.empty()) neg_ = false;
}

int BigInt::cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::vector<std::uint32_t> BigInt::add_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> r;
  r.reserve(std::max(a.size(), b.size()) + 1);
  std::uint64_t carry = 0;
  for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    std::uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r.push_back(static_cast<std::uint32_t>(s & 0xffffffffULL));
    carry = s >> 32;
  }
  if (carry) r.push_back(static_cast<std::uint32_t>(carry));
  return r;
}

std::vector<std::uint32_t> BigInt::sub_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> r;
  r.reserve(a.size());
  std::int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    std::int64_t d = static_cast<std::int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
    if (d < 0) {
      d += (1LL << 32);
      borrow = 1;
    } else {
      borrow = 0;
    }
    r.push_back(static_cast<std::uint32_t>(d));
  }
  return r;
}

std::vector<std::uint32_t> BigInt::mul_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint32_t> r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    std::uint64_t carry = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      std::uint64_t cur = r[i + j] + carry +
                          static_cast<std::uint64_t>(a[i]) * static_cast<std::uint64_t>(b[j]);
      r[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffULL);
      carry = cur >> 32;
    }
    size_t k = i + b.size();
    while (carry) {
      std::uint64_t cur = r[k] + carry;
      r[k] = static_cast<std::uint32_t>(cur & 0xffffffffULL);
      carry = cur >> 32;
      ++k;
    }
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

int BigInt::cmp(const BigInt& o) const {
  if (neg_ != o.neg_) return neg_ ? -1 : 1;
  int c = cmp_mag(limbs_, o.limbs_);
  return neg_ ? -c : c;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  if (!r.is_zero()) r.neg_ = !r.neg_;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt r;
  if (neg_ == o.neg_) {
    r.limbs_ = add_mag(limbs_, o.limbs_);
    r.neg_ = neg_;
  } else {
    int c = cmp_mag(limbs_, o.limbs_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.limbs_ = sub_mag(limbs_, o.limbs_);
      r.neg_ = neg_;
    } else {
      r.limbs_ = sub_mag(o.limbs_, limbs_);
      r.neg_ = o.neg_;
    }
  }
  r.trim();
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  BigInt r;
  r.limbs_ = mul_mag(limbs_, o.limbs_);
  r.neg_ = !r.limbs_.empty() && (neg_ != o.neg_);
  return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
  int c = cmp_mag(a.limbs_, b.limbs_);
  if (c < 0) {
    q = BigInt();
    r = a;
    return;
  }
  // Knuth-style long division over 32-bit limbs via a simple bit-shift loop.
  // Numbers in this project stay small enough that O(bits * limbs) is fine.
  size_t bits = a.limbs_.size() * 32;
  BigInt quot, rem;
  quot.limbs_.assign(a.limbs_.size(), 0);
  for (size_t i = bits; i-- > 0;) {
    // rem = rem*2 + bit i of |a|
    std::uint32_t carry = 0;
    for (size_t j = 0; j < rem.limbs_.size(); ++j) {
      std::uint32_t nv = (rem.limbs_[j] << 1) | carry;
      carry = rem.limbs_[j] >> 31;
      rem.limbs_[j] = nv;
    }
    if (carry) rem.limbs_.push_back(carry);
    std::uint32_t abit = (a.limbs_[i / 32] >> (i % 32)) & 1u;
    if (abit) {
      if (rem.limbs_.empty()) rem.limbs_.push_back(1);
      else {
        std::uint64_t s = static_cast<std::uint64_t>(rem.limbs_[0]) + 1;
        rem.limbs_[0] = static_cast<std::uint32_t>(s & 0xffffffffULL);
        std::uint64_t ca = s >> 32;
        size_t j = 1;
        while (ca) {
          if (j == rem.limbs_.size()) { rem.limbs_.push_back(0); }
          std::uint64_t t = static_cast<std::uint64_t>(rem.limbs_[j]) + ca;
          rem.limbs_[j] = static_cast<std::uint32_t>(t & 0xffffffffULL);
          ca = t >> 32;
          ++j;
        }
      }
    }
    if (cmp_mag(rem.limbs_, b.limbs_) >= 0) {
      rem.limbs_ = sub_mag(rem.limbs_, b.limbs_);
      while (!rem.limbs_.empty() && rem.limbs_.back() == 0) rem.limbs_.pop_back();
      quot.limbs_[i / 32] |= (1u << (i % 32));
    }
  }
  quot.trim();
  rem.trim();
  quot.neg_ = !quot.is_zero() && (a.neg_ != b.neg_);
  rem.neg_ = !rem.is_zero() && a.neg_;
  q = quot;
  r = rem;
}

BigInt BigInt::operator/(const BigInt& o) const {
  BigInt q, r;
  divmod(*this, o, q, r);
  return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
  BigInt q, r;
  divmod(*this, o, q, r);
  return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.neg_ = false;
  b.neg_ = false;
  while (!b.is_zero()) {
    BigInt q, r;
    divmod(a, b, q, r);
    a = b;
    b = r;
  }
  return a;
}

BigInt BigInt::pow(const BigInt& base, std::uint64_t exp) {
  BigInt r(1), b = base;
  while (exp) {
    if (exp & 1) r = r * b;
    b = b * b;
    exp >>= 1;
  }
  return r;
}

BigInt BigInt::binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt r(1);
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * BigInt::from_uint64(n - k + i);
    BigInt q, rem;
    divmod(r, BigInt::from_uint64(i), q, rem);
    r = q;
  }
  return r;
}

BigInt BigInt::multinomial(const std::vector<std::uint64_t>& parts) {
  BigInt r(1);
  std::uint64_t acc = 0;
  for (std::uint64_t p : parts) {
    acc += p;
    r = r * binomial(acc, p);
  }
  return r;
}

BigInt BigInt::falling_factorial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return BigInt(0);
  BigInt r(1);
  for (std::uint64_t i = 0; i < k; ++i) r = r * BigInt::from_uint64(n - i);
  return r;
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  BigInt v = abs();
  const BigInt chunk(1000000000);
  std::vector<std::uint32_t> groups;
  while (!v.is_zero()) {
    BigInt q, r;
    divmod(v, chunk, q, r);
    std::uint64_t g = 0;
    for (size_t i = r.limbs_.size(); i-- > 0;) g = (g << 32) | r.limbs_[i];
    groups.push_back(static_cast<std::uint32_t>(g));
    v = q;
  }
  std::string s = neg_ ? "-" : "";
  s += std::to_string(groups.back());
  for (size_t i = groups.size() - 1; i-- > 0;) {
    std::string part = std::to_string(groups[i]);
    s += std::string(9 - part.size(), '0') + part;
  }
  return s;
}

double BigInt::to_double() const {
  double r = 0;
  for (size_t i = limbs_.size(); i-- > 0;) r = r * 4294967296.0 + limbs_[i];
  return neg_ ? -r : r;
}

bool BigInt::fits_int64() const {
  if (limbs_.size() > 2) return false;
  if (limbs_.size() < 2) return true;
  std::uint64_t m = (static_cast<std::uint64_t>(limbs_[1]) << 32) | limbs_[0];
  if (neg_) return m <= 0x8000000000000000ULL;
  return m <= 0x7fffffffffffffffULL;
}

long long BigInt::to_int64() const {
  if (!fits_int64()) throw std::overflow_error("BigInt: does not fit int64");
  std::uint64_t m = 0;
  for (size_t i = limbs_.size(); i-- > 0;) m = (m << 32) | limbs_[i];
  if (neg_) return -static_cast<long long>(m - 1) - 1;
  return static_cast<long long>(m);
}

}  // namespace rw
