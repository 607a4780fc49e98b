#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace hipot {

// Timestamps are milliseconds since the Unix epoch, UTC.
using TimeMs = std::int64_t;

inline constexpr TimeMs kSecond = 1000;
inline constexpr TimeMs kMinute = 60 * kSecond;
inline constexpr TimeMs kHour = 60 * kMinute;
inline constexpr TimeMs kDay = 24 * kHour;

// RFC-3339 with milliseconds and a Z suffix: 2026-08-26T12:34:56.789Z
std::string format_rfc3339_ms(TimeMs ts);
std::optional<TimeMs> parse_rfc3339_ms(const std::string& s);

// Coarse human rendering (minutes/hours/days) for text reports.
std::string format_duration_coarse(TimeMs delta);

}  // namespace hipot
