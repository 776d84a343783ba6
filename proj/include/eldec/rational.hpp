#ifndef ELDEC_RATIONAL_HPP
#define ELDEC_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <string>

namespace eldec {

/// Exact rational with normalized sign (den > 0) and lowest terms.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  Rational() = default;
  Rational(int64_t n, int64_t d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  friend Rational operator+(Rational a, Rational b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(Rational a, Rational b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator/(Rational a, int64_t k) {
    return Rational(a.num, a.den * k);
  }
  friend bool operator==(Rational a, Rational b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(Rational a, Rational b) {
    return a.num * b.den < b.num * a.den;
  }

  std::string str() const {
    return den == 1 ? std::to_string(num)
                    : std::to_string(num) + "/" + std::to_string(den);
  }
};

inline Rational mid(Rational a, Rational b) { return (a + b) / 2; }

/// k-th positive rational in Calkin–Wilf order (k >= 1): 1, 1/2, 2, 1/3,
/// 3/2, … via the next-term map q ↦ 1/(2⌊q⌋ − q + 1).
inline Rational calkin_wilf(uint64_t k) {
  Rational q(1);
  for (uint64_t i = 1; i < k; ++i) {
    int64_t floor = q.num / q.den;  // q > 0 here
    Rational d = Rational(2 * floor + 1) - q;
    q = Rational(d.den, d.num);
  }
  return q;
}

/// k-th rational overall: 0, 1, −1, 1/2, −1/2, 2, −2, …
inline Rational rational_at(uint64_t k) {
  if (k == 0) return Rational(0);
  Rational q = calkin_wilf((k + 1) / 2);
  return k % 2 == 1 ? q : Rational(0) - q;
}

}  // namespace eldec

#endif
