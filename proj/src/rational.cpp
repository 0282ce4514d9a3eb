#include "rw/rational.hpp"

#include <stdexcept>

namespace rw {

void Rational::normalize() {
  if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
  if (den_.is_negative()) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  BigInt g = BigInt::gcd(num_, den_);
  if (g != BigInt(1)) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
}

Rational Rational::parse(const std::string& text) {
  size_t slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  }
  size_t dot = text.find('.');
  if (dot == std::string::npos) return Rational(BigInt(text));
  std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
  bool neg = !ip.empty() && ip[0] == '-';
  if (ip.empty() || ip == "-" || ip == "+") ip += "0";
  BigInt scale = BigInt::pow(BigInt(10), fp.size());
  BigInt whole = BigInt(ip).abs() * scale + (fp.empty() ? BigInt(0) : BigInt(fp));
  if (neg) whole = -whole;
  return Rational(whole, scale);
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(num_ * o.num_, den_ * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_.is_zero()) throw std::domain_error("Rational: division by zero");
  return Rational(num_ * o.den_, den_ * o.num_);
}

std::string Rational::to_string() const {
  if (den_ == BigInt(1)) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

}  // namespace rw
