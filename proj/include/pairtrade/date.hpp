#pragma once

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "pairtrade/error.hpp"

namespace pairtrade {

/// Calendar day, ISO-8601 `YYYY-MM-DD` on the wire.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  constexpr Date(int y, unsigned m, unsigned d)
      : days_(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}}) {}

  [[nodiscard]] constexpr std::chrono::sys_days sys_days() const noexcept { return days_; }
  [[nodiscard]] constexpr std::chrono::year_month_day ymd() const noexcept {
    return std::chrono::year_month_day{days_};
  }
  [[nodiscard]] constexpr Date plus_days(int n) const noexcept {
    return Date{days_ + std::chrono::days{n}};
  }
  /// 0 = Sunday ... 6 = Saturday.
  [[nodiscard]] unsigned weekday() const noexcept {
    return std::chrono::weekday{days_}.c_encoding();
  }

  [[nodiscard]] static std::optional<Date> try_parse(std::string_view text) noexcept {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    auto field = [](std::string_view s, auto& out) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      return ec == std::errc{} && ptr == s.data() + s.size();
    };
    if (!field(text.substr(0, 4), y) || !field(text.substr(5, 2), m) ||
        !field(text.substr(8, 2), d)) {
      return std::nullopt;
    }
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                    std::chrono::day{d}};
    if (!ymd.ok()) return std::nullopt;
    return Date{std::chrono::sys_days{ymd}};
  }

  [[nodiscard]] static Date parse(std::string_view text) {
    auto date = try_parse(text);
    if (!date) throw Error(ErrorCode::MalformedRow, "invalid ISO date '" + std::string(text) + "'");
    return *date;
  }

  [[nodiscard]] std::string iso() const {
    const auto ymd = this->ymd();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
  }

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

/// Inclusive date range [start, end].
struct Window {
  Date start;
  Date end;

  [[nodiscard]] constexpr bool contains(Date d) const noexcept { return start <= d && d <= end; }
  friend constexpr bool operator==(const Window&, const Window&) = default;
};

}  // namespace pairtrade
