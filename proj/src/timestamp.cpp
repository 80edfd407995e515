#include "lanet/timestamp.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace lanet {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::optional<int> parse_int_field(std::string_view s) {
    if (!all_digits(s) || s.size() > 9) return std::nullopt;
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct Civil {
    int year, month, day, hour, minute, second;
};

std::optional<UtcSeconds> to_utc(const Civil& c, int zone_offset_minutes) {
    if (!valid_civil_date(c.year, c.month, c.day)) return std::nullopt;
    if (c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59 || c.second < 0 ||
        c.second > 59) {
        return std::nullopt;
    }
    const std::int64_t days = days_from_civil(c.year, c.month, c.day);
    const std::int64_t local = days * kSecondsPerDay + c.hour * 3600 + c.minute * 60 + c.second;
    return local - static_cast<std::int64_t>(zone_offset_minutes) * 60;
}

// "YYYY-MM-DD[T ]HH:MM[:SS][Z|±HH:MM|±HHMM]"
std::optional<UtcSeconds> parse_iso(std::string_view s, int source_offset_minutes) {
    if (s.size() < 16) return std::nullopt;
    if (s[4] != '-' || s[7] != '-') return std::nullopt;
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    if (s[13] != ':') return std::nullopt;

    Civil c{};
    auto year = parse_int_field(s.substr(0, 4));
    auto month = parse_int_field(s.substr(5, 2));
    auto day = parse_int_field(s.substr(8, 2));
    auto hour = parse_int_field(s.substr(11, 2));
    auto minute = parse_int_field(s.substr(14, 2));
    if (!year || !month || !day || !hour || !minute) return std::nullopt;
    c.year = *year;
    c.month = *month;
    c.day = *day;
    c.hour = *hour;
    c.minute = *minute;

    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        if (pos + 3 > s.size()) return std::nullopt;
        auto second = parse_int_field(s.substr(pos + 1, 2));
        if (!second) return std::nullopt;
        c.second = *second;
        pos += 3;
    }

    int zone = source_offset_minutes;
    if (pos < s.size()) {
        std::string_view tail = s.substr(pos);
        if (tail == "Z" || tail == "z") {
            zone = 0;
        } else if (tail.size() >= 3 && (tail[0] == '+' || tail[0] == '-')) {
            std::string_view hhmm = tail.substr(1);
            std::optional<int> zh, zm;
            if (hhmm.size() == 5 && hhmm[2] == ':') {
                zh = parse_int_field(hhmm.substr(0, 2));
                zm = parse_int_field(hhmm.substr(3, 2));
            } else if (hhmm.size() == 4) {
                zh = parse_int_field(hhmm.substr(0, 2));
                zm = parse_int_field(hhmm.substr(2, 2));
            } else if (hhmm.size() == 2) {
                zh = parse_int_field(hhmm);
                zm = 0;
            }
            if (!zh || !zm || *zh > 23 || *zm > 59) return std::nullopt;
            zone = (*zh * 60 + *zm) * (tail[0] == '-' ? -1 : 1);
        } else {
            return std::nullopt;
        }
    }
    return to_utc(c, zone);
}

// "D/M/YY, HH:MM" with 1-2 digit day/month and 2- or 4-digit year.
std::optional<UtcSeconds> parse_moodle(std::string_view s, int source_offset_minutes) {
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    std::string_view date = trim(s.substr(0, comma));
    std::string_view time = trim(s.substr(comma + 1));

    const auto slash1 = date.find('/');
    if (slash1 == std::string_view::npos) return std::nullopt;
    const auto slash2 = date.find('/', slash1 + 1);
    if (slash2 == std::string_view::npos) return std::nullopt;

    auto day = parse_int_field(date.substr(0, slash1));
    auto month = parse_int_field(date.substr(slash1 + 1, slash2 - slash1 - 1));
    std::string_view year_text = date.substr(slash2 + 1);
    auto year = parse_int_field(year_text);
    if (!day || !month || !year) return std::nullopt;
    if (year_text.size() == 2) *year += 2000;
    if (year_text.size() != 2 && year_text.size() != 4) return std::nullopt;

    const auto colon = time.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto hour = parse_int_field(time.substr(0, colon));
    std::string_view rest = time.substr(colon + 1);
    std::optional<int> minute, second;
    const auto colon2 = rest.find(':');
    if (colon2 == std::string_view::npos) {
        minute = parse_int_field(rest);
        second = 0;
    } else {
        minute = parse_int_field(rest.substr(0, colon2));
        second = parse_int_field(rest.substr(colon2 + 1));
    }
    if (!hour || !minute || !second) return std::nullopt;

    Civil c{*year, *month, *day, *hour, *minute, *second};
    return to_utc(c, source_offset_minutes);
}

}  // namespace

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool valid_civil_date(int year, int month, int day) {
    if (year < 1 || month < 1 || month > 12 || day < 1) return false;
    static constexpr std::array<int, 12> days_in = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    int dmax = days_in[static_cast<std::size_t>(month - 1)];
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) dmax = 29;
    return day <= dmax;
}

std::optional<UtcSeconds> parse_timestamp(std::string_view text, int source_offset_minutes) {
    std::string_view s = trim(text);
    if (s.empty()) return std::nullopt;
    if (s.size() >= 10 && s[4] == '-') return parse_iso(s, source_offset_minutes);
    return parse_moodle(s, source_offset_minutes);
}

namespace {

struct CivilOut {
    int year, month, day, hour, minute, second;
};

CivilOut civil_from_seconds(UtcSeconds t) {
    std::int64_t days = t / kSecondsPerDay;
    std::int64_t rem = t % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        days -= 1;
    }
    // civil_from_days, inverse of days_from_civil
    std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
    CivilOut c{};
    c.year = static_cast<int>(y + (m <= 2));
    c.month = static_cast<int>(m);
    c.day = static_cast<int>(d);
    c.hour = static_cast<int>(rem / 3600);
    c.minute = static_cast<int>(rem % 3600 / 60);
    c.second = static_cast<int>(rem % 60);
    return c;
}

}  // namespace

std::string format_iso(UtcSeconds t) {
    const CivilOut c = civil_from_seconds(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                  c.hour, c.minute, c.second);
    return buf;
}

std::string format_moodle(UtcSeconds t) {
    const CivilOut c = civil_from_seconds(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%d/%d/%02d, %02d:%02d", c.day, c.month, c.year % 100, c.hour,
                  c.minute);
    return buf;
}

}  // namespace lanet
