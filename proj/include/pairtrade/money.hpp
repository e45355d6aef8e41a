#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "pairtrade/error.hpp"

namespace pairtrade {

/// Exact fixed-point currency amount with six fractional digits.
///
/// Vendor price files routinely carry up to six decimals, so cash and
/// holdings are tracked in micro-units; every ledger identity is then an
/// exact integer identity. Formatting keeps at least two fractional digits.
class Money {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Money() = default;

  [[nodiscard]] static constexpr Money from_micros(std::int64_t micros) noexcept {
    Money m;
    m.micros_ = micros;
    return m;
  }
  [[nodiscard]] static constexpr Money units(std::int64_t whole) noexcept {
    return from_micros(whole * kScale);
  }
  /// Nearest micro-unit, ties away from zero.
  [[nodiscard]] static Money from_double(double value) {
    if (!std::isfinite(value) || std::fabs(value) > 9.0e12) {
      throw Error(ErrorCode::InvariantViolation, "amount out of representable range");
    }
    return from_micros(static_cast<std::int64_t>(std::llround(value * static_cast<double>(kScale))));
  }

  [[nodiscard]] static std::optional<Money> try_parse(std::string_view text) noexcept {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
      negative = text[0] == '-';
      i = 1;
    }
    std::int64_t whole = 0;
    std::int64_t frac = 0;
    int frac_digits = 0;
    bool any_digit = false;
    bool round_up = false;
    for (; i < text.size() && text[i] != '.'; ++i) {
      const char c = text[i];
      if (c < '0' || c > '9') return std::nullopt;
      if (whole > 9'000'000'000'000) return std::nullopt;
      whole = whole * 10 + (c - '0');
      any_digit = true;
    }
    if (i < text.size()) {
      for (++i; i < text.size(); ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') return std::nullopt;
        any_digit = true;
        if (frac_digits < 6) {
          frac = frac * 10 + (c - '0');
          ++frac_digits;
        } else if (frac_digits == 6) {
          round_up = c >= '5';
          ++frac_digits;
        }
      }
    }
    if (!any_digit) return std::nullopt;
    for (int k = std::min(frac_digits, 6); k < 6; ++k) frac *= 10;
    std::int64_t micros = whole * kScale + frac + (round_up ? 1 : 0);
    return from_micros(negative ? -micros : micros);
  }

  [[nodiscard]] static Money parse(std::string_view text) {
    auto m = try_parse(text);
    if (!m) throw Error(ErrorCode::MalformedRow, "invalid amount '" + std::string(text) + "'");
    return *m;
  }

  [[nodiscard]] constexpr std::int64_t micros() const noexcept { return micros_; }
  [[nodiscard]] constexpr double to_double() const noexcept {
    return static_cast<double>(micros_) / static_cast<double>(kScale);
  }

  [[nodiscard]] std::string str() const {
    const bool negative = micros_ < 0;
    const auto mag = static_cast<std::uint64_t>(negative ? -(micros_ + 1) : micros_) +
                     (negative ? 1u : 0u);
    std::string out = negative ? "-" : "";
    out += std::to_string(mag / kScale);
    std::string frac = std::to_string(mag % kScale);
    frac.insert(0, 6 - frac.size(), '0');
    while (frac.size() > 2 && frac.back() == '0') frac.pop_back();
    out += '.';
    out += frac;
    return out;
  }

  [[nodiscard]] Money times(std::int64_t count) const {
    const auto product = static_cast<__int128>(micros_) * count;
    if (product > std::numeric_limits<std::int64_t>::max() ||
        product < std::numeric_limits<std::int64_t>::min()) {
      throw Error(ErrorCode::InvariantViolation, "currency overflow");
    }
    return from_micros(static_cast<std::int64_t>(product));
  }

  constexpr Money& operator+=(Money other) noexcept {
    micros_ += other.micros_;
    return *this;
  }
  constexpr Money& operator-=(Money other) noexcept {
    micros_ -= other.micros_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) noexcept { return a += b; }
  friend constexpr Money operator-(Money a, Money b) noexcept { return a -= b; }
  friend constexpr Money operator-(Money a) noexcept { return from_micros(-a.micros_); }
  friend constexpr auto operator<=>(const Money&, const Money&) = default;

 private:
  std::int64_t micros_ = 0;
};

}  // namespace pairtrade
