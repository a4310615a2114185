#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace orghier {

// Calendar instant, proleptic Gregorian, no timezone attached. Epoch-format
// inputs are read as UTC; ISO inputs are taken at face value.
struct Civil {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;

    bool operator==(const Civil&) const = default;
};

struct YearMonth {
    int year = 0;
    int month = 0;

    auto operator<=>(const YearMonth&) const = default;
};

// Days since 1970-01-01 (Howard Hinnant's civil-days algorithm).
std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

std::int64_t civil_to_epoch(const Civil& c);
Civil epoch_to_civil(std::int64_t seconds);

// 0 = Monday .. 6 = Sunday.
int weekday_of(std::int64_t epoch_seconds);

inline bool is_weekend(std::int64_t epoch_seconds) {
    return weekday_of(epoch_seconds) >= 5;
}

inline YearMonth year_month_of(std::int64_t epoch_seconds) {
    Civil c = epoch_to_civil(epoch_seconds);
    return {c.year, c.month};
}

// Accepts "YYYY-MM-DD HH:MM[:SS]" with ' ' or 'T' as the date/time separator;
// seconds optional. Returns nullopt on any malformation or out-of-range field.
std::optional<Civil> parse_iso8601(std::string_view text);

// "YYYY-MM-DDTHH:MM:SS"
std::string format_iso8601(std::int64_t epoch_seconds);

}  // namespace orghier
