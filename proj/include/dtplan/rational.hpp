#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dtplan {

// Exact rational arithmetic for durations, weights and times.
// A zero denominator encodes +infinity (used for unreachable distances
// and the open makespan bound). Negative infinity is not representable.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  static constexpr Rational infinity() {
    Rational r;
    r.num_ = 1;
    r.den_ = 0;
    return r;
  }

  bool is_infinite() const { return den_ == 0; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return den_ != 0 && num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  Rational operator+(const Rational& o) const {
    if (is_infinite() || o.is_infinite()) return infinity();
    __int128 n = (__int128)num_ * o.den_ + (__int128)o.num_ * den_;
    __int128 d = (__int128)den_ * o.den_;
    return from128(n, d);
  }
  Rational operator-(const Rational& o) const {
    if (is_infinite()) {
      if (o.is_infinite()) throw std::domain_error("inf - inf");
      return infinity();
    }
    if (o.is_infinite()) throw std::domain_error("finite - inf");
    __int128 n = (__int128)num_ * o.den_ - (__int128)o.num_ * den_;
    __int128 d = (__int128)den_ * o.den_;
    return from128(n, d);
  }
  Rational operator*(const Rational& o) const {
    if (is_infinite() || o.is_infinite()) {
      if (is_zero() || o.is_zero()) throw std::domain_error("0 * inf");
      return infinity();
    }
    return from128((__int128)num_ * o.num_, (__int128)den_ * o.den_);
  }
  Rational operator/(const Rational& o) const {
    if (o.is_infinite()) return Rational(0);
    if (o.is_zero()) throw std::domain_error("division by zero");
    if (is_infinite()) return infinity();
    __int128 n = (__int128)num_ * o.den_;
    __int128 d = (__int128)den_ * o.num_;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    return from128(n, d);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    if (is_infinite()) return false;
    if (o.is_infinite()) return true;
    return (__int128)num_ * o.den_ < (__int128)o.num_ * den_;
  }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  double to_double() const {
    if (is_infinite()) return 1e300;
    return (double)num_ / (double)den_;
  }

  // Exact decimal when the denominator is of the form 2^a * 5^b,
  // "num/den" otherwise, "inf" for infinity.
  std::string to_string() const {
    if (is_infinite()) return "inf";
    if (den_ == 1) return std::to_string(num_);
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
      d /= 2;
      ++twos;
    }
    while (d % 5 == 0) {
      d /= 5;
      ++fives;
    }
    if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
    int digits = twos > fives ? twos : fives;
    __int128 scaled = (__int128)(num_ < 0 ? -num_ : num_);
    for (int i = 0; i < digits; ++i) scaled *= 10;
    scaled /= den_;
    std::string s = u128_str((unsigned __int128)scaled);
    while ((int)s.size() <= digits) s.insert(s.begin(), '0');
    s.insert(s.end() - digits, '.');
    if (num_ < 0) s.insert(s.begin(), '-');
    return s;
  }

  // Accepts "12", "-3", "2.5", "0.125". Throws on anything else.
  static Rational parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty number");
    std::size_t pos = 0;
    bool neg = false;
    if (text[pos] == '-' || text[pos] == '+') {
      neg = text[pos] == '-';
      ++pos;
    }
    std::int64_t intpart = 0, fracpart = 0, scale = 1;
    bool any = false;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      intpart = checked_digit(intpart, text[pos]);
      ++pos;
      any = true;
    }
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      bool fdigit = false;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        fracpart = checked_digit(fracpart, text[pos]);
        if (scale > (std::int64_t)1e17)
          throw std::invalid_argument("too many decimal digits: " + text);
        scale *= 10;
        ++pos;
        fdigit = true;
      }
      if (!fdigit) throw std::invalid_argument("bad decimal: " + text);
      any = true;
    }
    if (!any || pos != text.size())
      throw std::invalid_argument("not a decimal number: " + text);
    Rational r(intpart);
    r += Rational(fracpart, scale);
    if (neg) r.num_ = -r.num_;
    return r;
  }

 private:
  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num_ = n;
    den_ = d;
  }

  static Rational from128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 g = gcd128(a, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim)
      throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = (std::int64_t)n;
    r.den_ = (std::int64_t)d;
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static std::int64_t checked_digit(std::int64_t v, char c) {
    if (v > (INT64_MAX - 9) / 10) throw std::overflow_error("number too large");
    return v * 10 + (c - '0');
  }

  static std::string u128_str(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
      s.insert(s.begin(), (char)('0' + (int)(v % 10)));
      v /= 10;
    }
    return s;
  }

  std::int64_t num_;
  std::int64_t den_;  // 0 encodes +infinity
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace dtplan
