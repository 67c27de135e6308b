#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "densitylab/errors.hpp"

namespace densitylab {

// Exact rational with small operands (densities of periodic sets).
// Always normalized: den > 0, gcd(|num|, den) = 1.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : n;
    den = g ? d / g : d;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  Rational over(std::int64_t m) const { return Rational(num, den * m); }

  Rational complement_in_unit() const { return Rational(den - num, den); }

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace densitylab
