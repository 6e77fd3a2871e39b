#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lexitrend {

class Day;

/// A calendar month, stored as a serial count of months since year 0.
class Month {
 public:
  constexpr Month() = default;
  Month(int year, unsigned month) : serial_(year * 12 + static_cast<int>(month) - 1) {}

  static constexpr Month from_serial(int serial) {
    Month m;
    m.serial_ = serial;
    return m;
  }

  int year() const;
  unsigned month() const;
  constexpr int serial() const { return serial_; }

  /// Number of days in this month, leap years included.
  int days() const;
  /// 60 * 24 * days(): the minute count a fully observed month has.
  std::int64_t minutes() const { return std::int64_t{1440} * days(); }
  Day first_day() const;

  Month operator+(int months) const { return from_serial(serial_ + months); }
  Month operator-(int months) const { return from_serial(serial_ - months); }
  int operator-(Month other) const { return serial_ - other.serial_; }
  Month& operator++() {
    ++serial_;
    return *this;
  }

  constexpr auto operator<=>(const Month&) const = default;

  /// "YYYY-MM"
  std::string to_string() const;
  /// Accepts exactly "YYYY-MM" with month 01-12.
  static std::optional<Month> parse(std::string_view text);

 private:
  int serial_ = 0;
};

/// A UTC calendar day, stored as days since 1970-01-01.
class Day {
 public:
  constexpr Day() = default;
  static constexpr Day from_serial(int serial) {
    Day d;
    d.serial_ = serial;
    return d;
  }
  static Day from_civil(int year, unsigned month, unsigned day);

  constexpr int serial() const { return serial_; }
  Month month() const;
  unsigned day_of_month() const;

  Day operator+(int days) const { return from_serial(serial_ + days); }
  int operator-(Day other) const { return serial_ - other.serial_; }
  constexpr auto operator<=>(const Day&) const = default;

  /// "YYYY-MM-DD"
  std::string to_string() const;
  static std::optional<Day> parse(std::string_view text);

 private:
  int serial_ = 0;
};

/// Minutes since the Unix epoch, UTC.
using MinuteStamp = std::int64_t;

inline Day day_of(MinuteStamp minute) {
  std::int64_t d = minute / 1440;
  if (minute % 1440 < 0) --d;
  return Day::from_serial(static_cast<int>(d));
}

inline MinuteStamp first_minute(Day day) { return std::int64_t{day.serial()} * 1440; }

/// Inclusive month range, e.g. 2012-01:2019-09.
struct MonthRange {
  Month first;
  Month last;

  int size() const { return last - first + 1; }
  bool contains(Month m) const { return first <= m && m <= last; }
  bool empty() const { return last < first; }
  bool operator==(const MonthRange&) const = default;
  std::string to_string() const;
  /// Parses "YYYY-MM:YYYY-MM"; first must not come after last.
  static std::optional<MonthRange> parse(std::string_view text);
};

/// Parses an ISO-8601 timestamp ("2014-03-05T17:22:10Z", optional
/// fractional seconds, "Z" or "+hh:mm" offset, ' ' accepted for 'T') or a
/// decimal epoch-seconds string. Returns the UTC minute.
std::optional<MinuteStamp> parse_timestamp(std::string_view text);

/// Formats a minute as "YYYY-MM-DDTHH:MM:00Z".
std::string format_timestamp(MinuteStamp minute);

}  // namespace lexitrend
