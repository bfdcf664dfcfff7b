#include <cstdio>
#include <fstream>

#include "arb/prices.hpp"
#include "doctest.h"

using namespace arb;

namespace {

struct TempCsv {
    std::string path;
    explicit TempCsv(const std::string& content) {
        path = std::string("prices_test_") + std::to_string(counter++) + ".csv";
        std::ofstream out(path);
        out << content;
    }
    ~TempCsv() { std::remove(path.c_str()); }
    static int counter;
};
int TempCsv::counter = 0;

std::string constant_days_csv(const std::string& country, const Date& start,
                              int n_days, double price, int skip_hour = -1,
                              int skip_day = -1) {
    std::string s = "datetime,country,price_eur_mwh\n";
    for (int d = 0; d < n_days; ++d) {
        const Date day = start.plus_days(d);
        for (int h = 0; h < 24; ++h) {
            if (d == skip_day && h == skip_hour) continue;
            char ts[32];
            std::snprintf(ts, sizeof ts, "%sT%02d:00:00Z", day.to_string().c_str(), h);
            s += std::string(ts) + "," + country + "," + std::to_string(price) + "\n";
        }
    }
    return s;
}

}  // namespace

TEST_CASE("load: constant data round-trip") {
    TempCsv f(constant_days_csv("DE", {2022, 1, 1}, 2, 100.0));
    PriceSeries s = load_price_csv(f.path, "DE", {2022, 1, 1}, {2022, 1, 2});
    REQUIRE(s.days.size() == 2);
    CHECK(s.country == "DE");
    for (const auto& row : s.prices)
        for (double p : row) CHECK(p == doctest::Approx(100.0));
}

TEST_CASE("load: missing hour rejects the day") {
    TempCsv f(constant_days_csv("DE", {2022, 1, 1}, 2, 100.0, /*skip_hour=*/13,
                                /*skip_day=*/0));
    CHECK_THROWS_WITH_AS(
        load_price_csv(f.path, "DE", {2022, 1, 1}, {2022, 1, 2}),
        doctest::Contains("incomplete day"), ArbError);
}

TEST_CASE("load: incomplete boundary day may be dropped by flag") {
    TempCsv f(constant_days_csv("DE", {2022, 1, 1}, 3, 50.0, /*skip_hour=*/2,
                                /*skip_day=*/0));
    PriceSeries s =
        load_price_csv(f.path, "DE", {2022, 1, 1}, {2022, 1, 3}, true);
    CHECK(s.days.size() == 2);
    CHECK(s.days.front() == Date{2022, 1, 2});
}

TEST_CASE("load: unknown country and missing file") {
    TempCsv f(constant_days_csv("DE", {2022, 1, 1}, 1, 100.0));
    CHECK_THROWS_AS(load_price_csv(f.path, "XX", {2022, 1, 1}, {2022, 1, 1}),
                    ArbError);
    CHECK_THROWS_AS(load_price_csv("no_such_file.csv", "DE", {2022, 1, 1},
                                   {2022, 1, 1}),
                    ArbError);
}

TEST_CASE("load: gap inside the range aborts") {
    std::string csv = constant_days_csv("DE", {2022, 1, 1}, 1, 100.0) +
                      constant_days_csv("DE", {2022, 1, 3}, 1, 100.0).substr(31);
    TempCsv f(csv);
    CHECK_THROWS_WITH_AS(load_price_csv(f.path, "DE", {2022, 1, 1}, {2022, 1, 3}),
                         doctest::Contains("missing day"), ArbError);
}

TEST_CASE("forecast: window semantics") {
    PriceSeries s;
    s.country = "DE";
    for (int d = 0; d < 4; ++d) {
        s.days.push_back(Date{2022, 1, 1 + d});
        std::array<double, 24> row{};
        row.fill(10.0 * (d + 1));  // 10, 20, 30, 40
        s.prices.push_back(row);
    }

    SUBCASE("l=1 repeats the previous day") {
        DayPrices f = forecast(s, {2022, 1, 4}, 1);
        CHECK(f.kind == PriceKind::Forecast);
        for (double v : f.values) CHECK(v == doctest::Approx(30.0));
    }
    SUBCASE("l=2 averages the two prior days") {
        DayPrices f = forecast(s, {2022, 1, 4}, 2);
        for (double v : f.values) CHECK(v == doctest::Approx(25.0));
    }
    SUBCASE("forecast beyond the series end uses trailing days") {
        DayPrices f = forecast(s, {2022, 1, 5}, 2);
        for (double v : f.values) CHECK(v == doctest::Approx(35.0));
    }
    SUBCASE("insufficient history is an error") {
        CHECK_THROWS_AS(forecast(s, {2022, 1, 2}, 2), ArbError);
        CHECK_THROWS_AS(forecast(s, {2022, 1, 4}, 0), ArbError);
    }
}

TEST_CASE("forecast: constant series and linearity properties") {
    PriceSeries a, b;
    a.country = b.country = "DE";
    std::array<double, 24> pat{};
    for (int h = 0; h < 24; ++h) pat[h] = 20.0 + 3.0 * h;
    for (int d = 0; d < 10; ++d) {
        a.days.push_back(Date{2022, 3, 1 + d});
        b.days.push_back(Date{2022, 3, 1 + d});
        a.prices.push_back(pat);
        std::array<double, 24> scaled;
        for (int h = 0; h < 24; ++h) scaled[h] = 2.5 * pat[h];
        b.prices.push_back(scaled);
    }
    for (int l : {1, 3, 7}) {
        DayPrices fa = forecast(a, {2022, 3, 10}, l);
        DayPrices fb = forecast(b, {2022, 3, 10}, l);
        for (int h = 0; h < 24; ++h) {
            CHECK(fa.values[h] == doctest::Approx(pat[h]));      // constant series
            CHECK(fb.values[h] == doctest::Approx(2.5 * pat[h]));  // linearity
        }
    }
}

TEST_CASE("mae: basic values and properties") {
    DayPrices a{{2022, 1, 1}, {}, PriceKind::Forecast};
    DayPrices b{{2022, 1, 1}, {}, PriceKind::Actual};
    CHECK(mae(a, b) == 0.0);
    a.values.fill(0.0);
    b.values.fill(5.0);
    CHECK(mae(a, b) == doctest::Approx(5.0));
    b.values = a.values;
    b.values[7] = 24.0;
    CHECK(mae(a, b) == doctest::Approx(1.0));
    CHECK(mae(a, b) >= 0.0);
    DayPrices c = a;
    c.date = {2022, 1, 2};
    CHECK_THROWS_AS(mae(a, c), ArbError);
}
