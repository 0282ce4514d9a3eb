#ifndef RW_RATIONAL_HPP
#define RW_RATIONAL_HPP

#include <string>

#include "rw/bigint.hpp"

namespace rw {

// Exact rational with positive denominator, always reduced.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}
  Rational(const BigInt& n) : num_(n), den_(1) {}
  Rational(const BigInt& n, const BigInt& d) : num_(n), den_(d) { normalize(); }
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  // Parses "p", "p/q", or a decimal like "0.25".
  static Rational parse(const std::string& text);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  Rational operator-() const { return Rational(-num_, den_, already_reduced{}); }
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
  Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
  Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return cmp(o) < 0; }
  bool operator<=(const Rational& o) const { return cmp(o) <= 0; }
  bool operator>(const Rational& o) const { return cmp(o) > 0; }
  bool operator>=(const Rational& o) const { return cmp(o) >= 0; }
  int cmp(const Rational& o) const { return (num_ * o.den_).cmp(o.num_ * den_); }

  double to_double() const { return num_.to_double() / den_.to_double(); }

  // "p/q", or just "p" when q == 1.
  std::string to_string() const;

 private:
  struct already_reduced {};
  Rational(const BigInt& n, const BigInt& d, already_reduced) : num_(n), den_(d) {}
  void normalize();
  BigInt num_, den_;
};

}  // namespace rw

#endif
