#ifndef RW_BIGINT_HPP
#define RW_BIGINT_HPP

#include <cstdint>
#include <string>
#include <vector>
#include <stdexcept>

namespace rw {

// Arbitrary-precision signed integer, base 2^32 limbs, little-endian.
// Zero is the empty limb vector with neg_ == false.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v);
  explicit BigInt(const std::string& decimal);

  static BigInt from_uint64(std::uint64_t v);

  bool is_zero() const { return limbs_.empty(); }
  bool is_negative() const { return neg_; }
  int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  BigInt operator/(const BigInt& o) const;  // truncated toward zero
  BigInt operator%(const BigInt& o) const;

  BigInt& operator+=(const BigInt& o) { *this = *this + o; return *this; }
  BigInt& operator-=(const BigInt& o) { *this = *this - o; return *this; }
  BigInt& operator*=(const BigInt& o) { *this = *this * o; return *this; }

  bool operator==(const BigInt& o) const { return neg_ == o.neg_ && limbs_ == o.limbs_; }
  bool operator!=(const BigInt& o) const { return !(*this == o); }
  bool operator<(const BigInt& o) const { return cmp(o) < 0; }
  bool operator<=(const BigInt& o) const { return cmp(o) <= 0; }
  bool operator>(const BigInt& o) const { return cmp(o) > 0; }
  bool operator>=(const BigInt& o) const { return cmp(o) >= 0; }

  int cmp(const BigInt& o) const;

  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
  static BigInt gcd(BigInt a, BigInt b);
  static BigInt pow(const BigInt& base, std::uint64_t exp);

  // Binomial and multinomial coefficients, exact.
  static BigInt binomial(std::uint64_t n, std::uint64_t k);
  static BigInt multinomial(const std::vector<std::uint64_t>& parts);
  static BigInt falling_factorial(std::uint64_t n, std::uint64_t k);

  BigInt abs() const { BigInt r = *this; r.neg_ = false; return r; }

  std::string to_string() const;
  double to_double() const;

  // Fits in signed 64 bits?
  bool fits_int64() const;
  long long to_int64() const;

 private:
  std::vector<std::uint32_t> limbs_;
  bool neg_ = false;

  void trim();
  static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);
  static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b);
  // Requires |a| >= |b|.
  static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b);
  static std::vector<std::uint32_t> mul_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b);
};

}  // namespace rw

#endif
