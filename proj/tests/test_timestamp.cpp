#include <doctest.h>

#include "lanet/timestamp.hpp"

using namespace lanet;

TEST_CASE("iso timestamps parse to utc") {
    CHECK(*parse_timestamp("1970-01-01T00:00:00Z") == 0);
    CHECK(*parse_timestamp("2022-10-03T00:00:00Z") == days_from_civil(2022, 10, 3) * 86400);
    CHECK(*parse_timestamp("2022-10-03 09:15") == days_from_civil(2022, 10, 3) * 86400 + 9 * 3600 + 15 * 60);
    CHECK(*parse_timestamp("2022-10-03T09:15:30Z") ==
          days_from_civil(2022, 10, 3) * 86400 + 9 * 3600 + 15 * 60 + 30);
}

TEST_CASE("explicit offsets are honored") {
    const auto base = *parse_timestamp("2022-10-03T10:00:00Z");
    CHECK(*parse_timestamp("2022-10-03T11:00:00+01:00") == base);
    CHECK(*parse_timestamp("2022-10-03T09:30:00-00:30") == base);
    CHECK(*parse_timestamp("2022-10-03T11:00:00+0100") == base);
}

TEST_CASE("source offset applies only without an explicit zone") {
    // +60 minutes east: local 10:00 is 09:00 UTC.
    CHECK(*parse_timestamp("2022-10-03T10:00:00", 60) ==
          *parse_timestamp("2022-10-03T09:00:00Z"));
    CHECK(*parse_timestamp("2022-10-03T10:00:00Z", 60) ==
          *parse_timestamp("2022-10-03T10:00:00Z"));
    CHECK(*parse_timestamp("3/10/22, 10:00", 60) == *parse_timestamp("2022-10-03T09:00:00Z"));
}

TEST_CASE("moodle export form parses day/month/year") {
    CHECK(*parse_timestamp("3/10/22, 09:15") ==
          days_from_civil(2022, 10, 3) * 86400 + 9 * 3600 + 15 * 60);
    CHECK(*parse_timestamp("13/1/23, 00:05") ==
          days_from_civil(2023, 1, 13) * 86400 + 5 * 60);
    CHECK(*parse_timestamp("13/01/2023, 00:05") == *parse_timestamp("13/1/23, 00:05"));
}

TEST_CASE("impossible dates and junk are rejected") {
    CHECK_FALSE(parse_timestamp("31/02/23, 10:00").has_value());  // no 31 February
    CHECK_FALSE(parse_timestamp("2023-02-29T00:00:00Z").has_value());
    CHECK(parse_timestamp("2024-02-29T00:00:00Z").has_value());  // leap year
    CHECK_FALSE(parse_timestamp("").has_value());
    CHECK_FALSE(parse_timestamp("yesterday").has_value());
    CHECK_FALSE(parse_timestamp("2022-13-01T00:00:00Z").has_value());
    CHECK_FALSE(parse_timestamp("2022-10-03T24:00:00Z").has_value());
    CHECK_FALSE(parse_timestamp("0/10/22, 10:00").has_value());
    CHECK_FALSE(parse_timestamp("3/10/22").has_value());
}

TEST_CASE("format round trips") {
    for (UtcSeconds t : {UtcSeconds{0}, UtcSeconds{951827696},
                         days_from_civil(2022, 10, 3) * 86400 + 12345}) {
        CHECK(*parse_timestamp(format_iso(t)) == t);
    }
    // The export form writes two-digit years, readable as 20xx only.
    for (UtcSeconds t : {UtcSeconds{951827696}, days_from_civil(2022, 10, 3) * 86400 + 12345,
                         days_from_civil(2099, 12, 31) * 86400 + 86340}) {
        CHECK(*parse_timestamp(format_moodle(t)) == t - t % 60);
    }
}
