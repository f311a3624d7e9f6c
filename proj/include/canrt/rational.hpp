#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace canrt {

/// Exact fraction with positive denominator, kept in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "3/4", or "2" for whole numbers.
  std::string to_string() const;

  /// Accepts "3/4", "1" or a finite decimal such as "0.75". Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace canrt
