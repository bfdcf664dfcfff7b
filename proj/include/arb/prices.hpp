#ifndef ARB_PRICES_HPP
#define ARB_PRICES_HPP

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arb/date.hpp"
#include "arb/error.hpp"

namespace arb {

enum class PriceKind { Actual, Forecast };

struct DayPrices {
    Date date;
    std::array<double, 24> values{};  // EUR/MWh
    PriceKind kind = PriceKind::Actual;
};

// Hourly day-ahead prices for one country over consecutive calendar days.
// Immutable after load; one row of 24 EUR/MWh values per day.
struct PriceSeries {
    std::string country;
    std::vector<Date> days;
    std::vector<std::array<double, 24>> prices;

    std::optional<size_t> index_of(const Date& d) const {
        if (days.empty() || d < days.front() || days.back() < d) return std::nullopt;
        const auto idx = static_cast<size_t>(days_between(days.front(), d));
        return idx;  // days are consecutive, so the offset is the index
    }

    DayPrices day_prices(const Date& d) const {
        auto idx = index_of(d);
        require(idx.has_value(), ErrorKind::Data,
                "date " + d.to_string() + " not in price series");
        return {d, prices[*idx], PriceKind::Actual};
    }
};

namespace prices_detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) out.push_back(field);
    return out;
}

// "2022-01-01T13:00:00Z" or "2022-01-01 13:00:00" -> (date, hour)
inline std::pair<Date, int> parse_timestamp(const std::string& ts) {
    const Date d = Date::parse(ts);
    require(ts.size() >= 13, ErrorKind::Data, "timestamp too short: '" + ts + "'");
    const int hour = std::stoi(ts.substr(11, 2));
    require(hour >= 0 && hour <= 23, ErrorKind::Data, "bad hour in '" + ts + "'");
    return {d, hour};
}

}  // namespace prices_detail

// Loads the hourly price CSV (columns datetime, country, price_eur_mwh) and
// returns the complete days in [start, end]. Days with missing or duplicate
// hours abort the load unless they touch the range boundary and
// drop_incomplete_boundary_days is set.
inline PriceSeries load_price_csv(const std::string& path,
                                  const std::string& country, const Date& start,
                                  const Date& end,
                                  bool drop_incomplete_boundary_days = false) {
    using namespace prices_detail;
    std::ifstream in(path);
    require(in.good(), ErrorKind::Data, "cannot open price file: " + path);
    require(start <= end, ErrorKind::Validation, "start date after end date");

    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorKind::Data,
            "empty price file: " + path);
    auto header = split_csv_line(line);
    int col_dt = -1, col_country = -1, col_price = -1;
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "datetime") col_dt = static_cast<int>(i);
        else if (header[i] == "country") col_country = static_cast<int>(i);
        else if (header[i] == "price_eur_mwh") col_price = static_cast<int>(i);
    }
    require(col_dt >= 0 && col_country >= 0 && col_price >= 0, ErrorKind::Data,
            "price CSV must have datetime, country, price_eur_mwh columns");

    std::map<Date, std::array<std::optional<double>, 24>> byday;
    bool saw_country = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        require(static_cast<int>(f.size()) >
                    std::max({col_dt, col_country, col_price}),
                ErrorKind::Data, "short row: '" + line + "'");
        if (f[col_country] != country) continue;
        saw_country = true;
        auto [d, hour] = parse_timestamp(f[col_dt]);
        if (d < start || end < d) continue;
        const double p = std::stod(f[col_price]);
        require(std::isfinite(p), ErrorKind::Data,
                "non-finite price at " + f[col_dt]);
        auto& slots = byday[d];
        require(!slots[hour].has_value(), ErrorKind::Data,
                "duplicate hour " + std::to_string(hour) + " on " + d.to_string());
        slots[hour] = p;
    }
    require(saw_country, ErrorKind::Data, "country not found in file: " + country);
    require(!byday.empty(), ErrorKind::Data,
            "no data in requested range for " + country);

    PriceSeries series;
    series.country = country;
    for (auto& [d, slots] : byday) {
        std::array<double, 24> row{};
        bool complete = true;
        for (int h = 0; h < 24; ++h) {
            if (!slots[h].has_value()) { complete = false; break; }
            row[h] = *slots[h];
        }
        if (!complete) {
            const bool boundary = d == byday.begin()->first || d == byday.rbegin()->first;
            if (drop_incomplete_boundary_days && boundary) continue;
            throw ArbError(ErrorKind::Data, "incomplete day " + d.to_string() +
                                                " (missing hours)");
        }
        if (!series.days.empty())
            require(days_between(series.days.back(), d) == 1, ErrorKind::Data,
                    "missing day between " + series.days.back().to_string() +
                        " and " + d.to_string());
        series.days.push_back(d);
        series.prices.push_back(row);
    }
    require(!series.days.empty(), ErrorKind::Data,
            "no complete days in requested range for " + country);
    return series;
}

// Rolling-mean forecast: hour h of the forecast is the mean of hour h over
// the l days preceding d.
inline DayPrices forecast(const PriceSeries& series, const Date& d, int window_l) {
    require(window_l >= 1, ErrorKind::Validation, "forecast: window must be >= 1");
    const Date first_needed = d.plus_days(-window_l);
    auto i0 = series.index_of(first_needed);
    auto i1 = series.index_of(d.plus_days(-1));
    require(i0.has_value() && i1.has_value(), ErrorKind::Data,
            "insufficient history to forecast " + d.to_string() + " with l=" +
                std::to_string(window_l));
    DayPrices out;
    out.date = d;
    out.kind = PriceKind::Forecast;
    for (int h = 0; h < 24; ++h) {
        double sum = 0.0;
        for (size_t i = *i0; i <= *i1; ++i) sum += series.prices[i][h];
        out.values[h] = sum / window_l;
    }
    return out;
}

// Mean absolute error between two 24-hour price vectors for the same date.
inline double mae(const DayPrices& forecast, const DayPrices& actual) {
    require(forecast.date == actual.date, ErrorKind::Validation,
            "mae: date mismatch");
    double sum = 0.0;
    for (int h = 0; h < 24; ++h) sum += std::fabs(forecast.values[h] - actual.values[h]);
    return sum / 24.0;
}

}  // namespace arb

#endif
