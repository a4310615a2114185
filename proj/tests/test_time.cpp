#include <doctest.h>

#include <ctime>
#include <random>

#include "orghier/rng.hpp"
#include "orghier/time.hpp"

using namespace orghier;

TEST_SUITE("time") {

TEST_CASE("iso8601 parsing") {
    auto c = parse_iso8601("2010-01-04T09:12:00");
    REQUIRE(c.has_value());
    CHECK(c->year == 2010);
    CHECK(c->month == 1);
    CHECK(c->day == 4);
    CHECK(c->hour == 9);
    CHECK(c->minute == 12);
    CHECK(parse_iso8601("2010-01-04 09:12").has_value());  // space separator, no seconds
    CHECK_FALSE(parse_iso8601("2010-13-04T09:12:00").has_value());
    CHECK_FALSE(parse_iso8601("2010-02-30T09:12:00").has_value());
    CHECK_FALSE(parse_iso8601("not a date").has_value());
    CHECK_FALSE(parse_iso8601("2010-01-04T25:00:00").has_value());
}

TEST_CASE("epoch and calendar agree with the C library") {
    // independent oracle: timegm/gmtime_r on random instants
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        auto seconds = static_cast<std::int64_t>(rng_index(rng, 4102444800ULL));  // < 2100
        Civil c = epoch_to_civil(seconds);

        std::tm tm{};
        time_t t = static_cast<time_t>(seconds);
        gmtime_r(&t, &tm);
        CHECK(c.year == tm.tm_year + 1900);
        CHECK(c.month == tm.tm_mon + 1);
        CHECK(c.day == tm.tm_mday);
        CHECK(c.hour == tm.tm_hour);
        CHECK(c.minute == tm.tm_min);
        CHECK(c.second == tm.tm_sec);
        CHECK(civil_to_epoch(c) == seconds);

        // Monday = 0 here, Sunday = 0 for the C library
        CHECK(weekday_of(seconds) == (tm.tm_wday + 6) % 7);
    }
}

TEST_CASE("spec conversion example") {
    // 1262596320 is 2010-01-04 09:12 UTC
    Civil c = epoch_to_civil(1262596320);
    CHECK(c == Civil{2010, 1, 4, 9, 12, 0});
    CHECK(civil_to_epoch(*parse_iso8601("2010-01-04T09:12:00")) == 1262596320);
}

TEST_CASE("weekends and months") {
    std::int64_t saturday = civil_to_epoch({2010, 1, 2, 12, 0, 0});
    std::int64_t sunday = civil_to_epoch({2010, 1, 3, 12, 0, 0});
    std::int64_t monday = civil_to_epoch({2010, 1, 4, 12, 0, 0});
    CHECK(is_weekend(saturday));
    CHECK(is_weekend(sunday));
    CHECK_FALSE(is_weekend(monday));
    CHECK(year_month_of(monday) == YearMonth{2010, 1});
    CHECK(YearMonth{2009, 12} < YearMonth{2010, 1});
}

}  // TEST_SUITE
