#include "lagcast/error.hpp"
#include "lagcast/rng.hpp"
#include "lagcast/series.hpp"

#include <doctest.h>

using namespace lagcast;

namespace {

TimeSeries make(Role role, Date start, std::vector<double> v) {
    return TimeSeries{role, start, std::move(v)};
}

} // namespace

TEST_CASE("cumulative_to_daily takes first differences, first value passes through") {
    auto out = cumulative_to_daily(make(Role::deaths(), Date(2020, 1, 22), {0, 1, 3, 6}));
    CHECK(out.values == std::vector<double>{0, 1, 2, 3});
    CHECK(out.start_date == Date(2020, 1, 22));
    CHECK(out.role == Role::deaths());

    auto singleton = cumulative_to_daily(make(Role::deaths(), Date(2020, 1, 22), {5}));
    CHECK(singleton.values == std::vector<double>{5});

    auto constant = cumulative_to_daily(make(Role::deaths(), Date(2020, 1, 22), {7, 7, 7}));
    CHECK(constant.values == std::vector<double>{7, 0, 0});
}

TEST_CASE("negative daily increments are preserved, clamping is explicit") {
    auto out = cumulative_to_daily(make(Role::deaths(), Date(2020, 1, 22), {5, 3, 8}));
    CHECK(out.values == std::vector<double>{5, -2, 5});
    CHECK(clamp_negative(out).values == std::vector<double>{5, 0, 5});
}

TEST_CASE("daily_to_cumulative is the running sum") {
    auto out = daily_to_cumulative(make(Role::confirmed(), Date(2020, 1, 22), {0, 1, 2, 3}));
    CHECK(out.values == std::vector<double>{0, 1, 3, 6});
    CHECK(daily_to_cumulative(make(Role::confirmed(), Date(2020, 1, 22), {5})).values ==
          std::vector<double>{5});
}

TEST_CASE("round-trip law on random series") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng.next_below(40);
        std::vector<double> values(n);
        for (double& v : values) v = rng.uniform(-100.0, 100.0);
        TimeSeries s = make(Role::recovered(), Date(2020, 3, 1), values);
        TimeSeries back = daily_to_cumulative(cumulative_to_daily(s));
        REQUIRE(back.values.size() == s.values.size());
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(back.values[i] == doctest::Approx(s.values[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("align clips to the date intersection") {
    TimeSeries a = make(Role::deaths(), Date(2021, 1, 1), std::vector<double>(10, 1.0));
    TimeSeries b = make(Role::confirmed(), Date(2021, 1, 5), std::vector<double>(11, 2.0));

    auto identical = align({a, a});
    CHECK(identical[0].values == a.values);
    CHECK(identical[1].start_date == a.start_date);

    auto clipped = align({a, b});
    CHECK(clipped[0].start_date == Date(2021, 1, 5));
    CHECK(clipped[1].start_date == Date(2021, 1, 5));
    CHECK(clipped[0].size() == 6);
    CHECK(clipped[1].size() == 6);

    TimeSeries c = make(Role::recovered(), Date(2022, 1, 1), {1, 2});
    CHECK_THROWS_WITH_AS(align({a, c}), doctest::Contains("overlap"), Error);
}

TEST_CASE("align outputs are contiguous slices of their inputs") {
    Rng rng(5);
    std::vector<double> values(20);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = double(i);
    TimeSeries a = make(Role::deaths(), Date(2021, 1, 1), values);
    TimeSeries b = make(Role::confirmed(), Date(2021, 1, 8), std::vector<double>(20, 0.0));
    auto out = align({a, b});
    for (std::size_t i = 0; i < out[0].size(); ++i) {
        std::size_t offset = static_cast<std::size_t>(out[0].start_date - a.start_date);
        CHECK(out[0].values[i] == a.values[offset + i]);
    }
}

TEST_CASE("ratio split uses floor and stays chronological") {
    TimeSeries s = make(Role::deaths(), Date(2020, 1, 22), std::vector<double>(10, 0.0));
    for (std::size_t i = 0; i < 10; ++i) s.values[i] = double(i);

    auto [train, test] = split(s, SplitSpec::ratio(0.8));
    CHECK(train.size() == 8);
    CHECK(test.size() == 2);
    CHECK(test.start_date == Date(2020, 1, 30));
    CHECK(train.values.back() == 7.0);
    CHECK(test.values.front() == 8.0);

    // concatenation restores the input
    std::vector<double> joined = train.values;
    joined.insert(joined.end(), test.values.begin(), test.values.end());
    CHECK(joined == s.values);
}

TEST_CASE("date boundary split") {
    TimeSeries s = make(Role::deaths(), Date(2020, 1, 22), std::vector<double>(366, 1.0));
    auto [train, test] = split(s, SplitSpec::date_boundary(Date(2020, 11, 7)));
    CHECK(train.end_date() == Date(2020, 11, 7));
    CHECK(test.start_date == Date(2020, 11, 8));
    CHECK(train.size() + test.size() == 366);

    CHECK_THROWS_AS(split(s, SplitSpec::date_boundary(s.end_date())), Error);
    CHECK_THROWS_AS(split(s, SplitSpec::date_boundary(Date(2019, 1, 1))), Error);
}

TEST_CASE("degenerate splits are rejected") {
    TimeSeries s = make(Role::deaths(), Date(2020, 1, 22), {1, 2});
    CHECK_THROWS_AS(split(s, SplitSpec::ratio(0.01)), Error);
    try {
        split(s, SplitSpec::ratio(0.01));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateSplit);
    }
}

TEST_CASE("date parsing and arithmetic") {
    CHECK(Date::parse_mdy("1/22/20") == Date(2020, 1, 22));
    CHECK(Date::parse_mdy("12/31/20").to_iso() == "2020-12-31");
    CHECK(Date::parse_iso("2021-01-18") - Date::parse_iso("2020-01-22") == 362);
    CHECK((Date(2020, 2, 28) + 1) == Date(2020, 2, 29));  // leap year
    CHECK(Date(2020, 1, 22).to_mdy() == "1/22/20");
    CHECK_THROWS_AS(Date::parse_mdy("13/45/20"), Error);
    CHECK_THROWS_AS(Date::parse_iso("2021-13-01"), Error);
}
