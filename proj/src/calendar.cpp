#include "lexitrend/calendar.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace lexitrend {

namespace chr = std::chrono;

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool parse_digits(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

int Month::year() const { return floor_div(serial_, 12); }

unsigned Month::month() const { return static_cast<unsigned>(serial_ - year() * 12 + 1); }

int Month::days() const {
  chr::year_month_day_last last{chr::year{year()} / chr::month{month()} / chr::last};
  return static_cast<int>(static_cast<unsigned>(last.day()));
}

Day Month::first_day() const { return Day::from_civil(year(), month(), 1); }

std::string Month::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", year(), month());
  return buf;
}

std::optional<Month> Month::parse(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') return std::nullopt;
  int y = 0, m = 0;
  if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), m)) return std::nullopt;
  if (m < 1 || m > 12) return std::nullopt;
  return Month(y, static_cast<unsigned>(m));
}

Day Day::from_civil(int year, unsigned month, unsigned day) {
  chr::sys_days days{chr::year{year} / chr::month{month} / chr::day{day}};
  return from_serial(static_cast<int>(days.time_since_epoch().count()));
}

Month Day::month() const {
  chr::year_month_day ymd{chr::sys_days{chr::days{serial_}}};
  return Month(static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()));
}

unsigned Day::day_of_month() const {
  chr::year_month_day ymd{chr::sys_days{chr::days{serial_}}};
  return static_cast<unsigned>(ymd.day());
}

std::string Day::to_string() const {
  chr::year_month_day ymd{chr::sys_days{chr::days{serial_}}};
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<Day> Day::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), m) ||
      !parse_digits(text.substr(8, 2), d))
    return std::nullopt;
  chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                          chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string MonthRange::to_string() const { return first.to_string() + ":" + last.to_string(); }

std::optional<MonthRange> MonthRange::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto a = Month::parse(text.substr(0, colon));
  auto b = Month::parse(text.substr(colon + 1));
  if (!a || !b || *b < *a) return std::nullopt;
  return MonthRange{*a, *b};
}

std::optional<MinuteStamp> parse_timestamp(std::string_view text) {
  if (text.empty()) return std::nullopt;

  // Epoch seconds, optionally signed and fractional.
  bool numeric = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (!((c >= '0' && c <= '9') || c == '.' || (i == 0 && c == '-'))) {
      numeric = false;
      break;
    }
  }
  if (numeric) {
    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::int64_t secs = 0;
    auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), secs);
    if (ec != std::errc{} || ptr != whole.data() + whole.size()) return std::nullopt;
    std::int64_t minute = secs / 60;
    if (secs % 60 < 0 || (secs % 60 == 0 && secs < 0 && dot != std::string_view::npos)) --minute;
    return minute;
  }

  // YYYY-MM-DD[T ]HH:MM[:SS[.fff]][Z|+hh:mm|-hh:mm]
  if (text.size() < 16) return std::nullopt;
  auto day = Day::parse(text.substr(0, 10));
  if (!day || (text[10] != 'T' && text[10] != ' ')) return std::nullopt;
  int hh = 0, mm = 0;
  if (!parse_digits(text.substr(11, 2), hh) || text[13] != ':' || !parse_digits(text.substr(14, 2), mm))
    return std::nullopt;
  if (hh > 23 || mm > 59) return std::nullopt;
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    int ss = 0;
    if (pos + 3 > text.size() || !parse_digits(text.substr(pos + 1, 2), ss) || ss > 60) return std::nullopt;
    pos += 3;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      if (pos == start) return std::nullopt;
    }
  }
  int offset_minutes = 0;
  if (pos < text.size()) {
    std::string_view tz = text.substr(pos);
    if (tz == "Z") {
    } else if ((tz[0] == '+' || tz[0] == '-') && (tz.size() == 6 || tz.size() == 5)) {
      int oh = 0, om = 0;
      std::string_view mins = tz.size() == 6 ? tz.substr(4, 2) : tz.substr(3, 2);
      if (!parse_digits(tz.substr(1, 2), oh) || (tz.size() == 6 && tz[3] != ':') || !parse_digits(mins, om))
        return std::nullopt;
      offset_minutes = (oh * 60 + om) * (tz[0] == '+' ? 1 : -1);
    } else {
      return std::nullopt;
    }
  }
  return first_minute(*day) + hh * 60 + mm - offset_minutes;
}

std::string format_timestamp(MinuteStamp minute) {
  Day d = day_of(minute);
  auto in_day = static_cast<int>(minute - first_minute(d));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:00Z", d.to_string().c_str(), in_day / 60, in_day % 60);
  return buf;
}

}  // namespace lexitrend
