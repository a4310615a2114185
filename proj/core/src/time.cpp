#include "orghier/time.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace orghier {

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);            // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;  // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;           // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);                 // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;   // [0, 399]
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);                 // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                                      // [0, 11]
    day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    year = static_cast<int>(y + (month <= 2));
}

std::int64_t civil_to_epoch(const Civil& c) {
    return days_from_civil(c.year, c.month, c.day) * 86400 + c.hour * 3600 + c.minute * 60 +
           c.second;
}

Civil epoch_to_civil(std::int64_t seconds) {
    std::int64_t days = seconds / 86400;
    std::int64_t rem = seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    Civil c;
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(rem / 3600);
    c.minute = static_cast<int>((rem / 60) % 60);
    c.second = static_cast<int>(rem % 60);
    return c;
}

int weekday_of(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    if (epoch_seconds % 86400 < 0) days -= 1;
    // 1970-01-01 was a Thursday (index 3 with Monday = 0).
    std::int64_t wd = (days + 3) % 7;
    if (wd < 0) wd += 7;
    return static_cast<int>(wd);
}

namespace {

bool parse_int_field(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    const char* first = s.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
}

constexpr std::array<int, 13> kDaysInMonth = {0, 31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace

std::optional<Civil> parse_iso8601(std::string_view text) {
    // YYYY-MM-DD{T| }HH:MM[:SS]
    if (text.size() != 16 && text.size() != 19) return std::nullopt;
    Civil c;
    if (!parse_int_field(text, 0, 4, c.year) || text[4] != '-' ||
        !parse_int_field(text, 5, 2, c.month) || text[7] != '-' ||
        !parse_int_field(text, 8, 2, c.day))
        return std::nullopt;
    if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
    if (!parse_int_field(text, 11, 2, c.hour) || text[13] != ':' ||
        !parse_int_field(text, 14, 2, c.minute))
        return std::nullopt;
    if (text.size() == 19) {
        if (text[16] != ':' || !parse_int_field(text, 17, 2, c.second)) return std::nullopt;
    }
    if (c.month < 1 || c.month > 12) return std::nullopt;
    int dim = kDaysInMonth[c.month] + (c.month == 2 && is_leap(c.year) ? 1 : 0);
    if (c.day < 1 || c.day > dim) return std::nullopt;
    if (c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59 || c.second < 0 ||
        c.second > 59)
        return std::nullopt;
    return c;
}

std::string format_iso8601(std::int64_t epoch_seconds) {
    Civil c = epoch_to_civil(epoch_seconds);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", c.year, c.month, c.day,
                  c.hour, c.minute, c.second);
    return buf;
}

}  // namespace orghier
