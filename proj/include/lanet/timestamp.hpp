#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lanet {

/// Seconds since the Unix epoch, UTC.
using UtcSeconds = std::int64_t;

constexpr std::int64_t kSecondsPerDay = 86400;

/// Parse a timestamp in either ISO-8601 form ("2022-10-03T09:15:00Z",
/// "2022-10-03 09:15", offsets like "+01:00" honored) or the Moodle export
/// form "3/10/22, 09:15" (day/month/year). Timestamps without an explicit
/// zone are interpreted as local to a fixed source offset, in minutes east of
/// UTC. Returns nullopt for anything malformed, including impossible calendar
/// dates such as 31 February.
std::optional<UtcSeconds> parse_timestamp(std::string_view text, int source_offset_minutes = 0);

/// Format as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso(UtcSeconds t);

/// Format as the Moodle export form "D/M/YY, HH:MM" (UTC, minute precision).
std::string format_moodle(UtcSeconds t);

/// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int year, int month, int day);

/// True if (year, month, day) is a real calendar date.
bool valid_civil_date(int year, int month, int day);

}  // namespace lanet
