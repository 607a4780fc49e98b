#include "hipot/timeutil.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>

namespace hipot {

namespace {

// Days from civil date, Howard Hinnant's algorithm.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

}  // namespace

std::string format_rfc3339_ms(TimeMs ts) {
  std::int64_t days = ts / kDay;
  std::int64_t rem = ts % kDay;
  if (rem < 0) {
    rem += kDay;
    --days;
  }
  std::int64_t y;
  unsigned mo, d;
  civil_from_days(days, y, mo, d);
  const int h = static_cast<int>(rem / kHour);
  const int mi = static_cast<int>((rem / kMinute) % 60);
  const int s = static_cast<int>((rem / kSecond) % 60);
  const int ms = static_cast<int>(rem % 1000);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04" PRId64 "-%02u-%02uT%02d:%02d:%02d.%03dZ",
                y, mo, d, h, mi, s, ms);
  return buf;
}

std::optional<TimeMs> parse_rfc3339_ms(const std::string& s) {
  int y, mo, d, h, mi, sec, ms;
  char z;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3d%c",
                  &y, &mo, &d, &h, &mi, &sec, &ms, &z) != 8 ||
      z != 'Z') {
    return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60 ||
      ms > 999 || h < 0 || mi < 0 || sec < 0 || ms < 0) {
    return std::nullopt;
  }
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * kDay +
         h * kHour + mi * kMinute + sec * kSecond + ms;
}

std::string format_duration_coarse(TimeMs delta) {
  char buf[48];
  if (delta < kMinute) {
    std::snprintf(buf, sizeof(buf), "%" PRId64 " s", delta / kSecond);
  } else if (delta < kHour) {
    std::snprintf(buf, sizeof(buf), "%" PRId64 " minutes", delta / kMinute);
  } else if (delta < kDay) {
    std::snprintf(buf, sizeof(buf), "%" PRId64 " hours", delta / kHour);
  } else if (delta % kDay == 0) {
    std::snprintf(buf, sizeof(buf), "%" PRId64 " days", delta / kDay);
  } else {
    std::snprintf(buf, sizeof(buf), "%.1f days",
                  static_cast<double>(delta) / static_cast<double>(kDay));
  }
  return buf;
}

}  // namespace hipot
