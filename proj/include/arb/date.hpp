#ifndef ARB_DATE_HPP
#define ARB_DATE_HPP

#include <compare>
#include <cstdio>
#include <string>

#include "arb/error.hpp"

namespace arb {

// Civil calendar date. Arithmetic goes through the rata-die encoding so
// consecutive days are consecutive integers across month/year boundaries.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    // Days since 1970-01-01 (Howard Hinnant's days_from_civil).
    long long rata_die() const {
        long long y = year;
        unsigned m = static_cast<unsigned>(month);
        unsigned d = static_cast<unsigned>(day);
        y -= m <= 2;
        const long long era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + static_cast<long long>(doe) - 719468;
    }

    static Date from_rata_die(long long z) {
        z += 719468;
        const long long era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const long long y = static_cast<long long>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        const unsigned d = doy - (153 * mp + 2) / 5 + 1;
        const unsigned m = mp + (mp < 10 ? 3 : -9);
        return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                    static_cast<int>(d)};
    }

    Date plus_days(long long n) const { return from_rata_die(rata_die() + n); }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    // Accepts "YYYY-MM-DD"; anything after the date (time of day) is ignored.
    static Date parse(const std::string& s) {
        int y = 0, m = 0, d = 0;
        if (s.size() < 10 || std::sscanf(s.c_str(), "%4d-%2d-%2d", &y, &m, &d) != 3)
            throw ArbError(ErrorKind::Data, "unparseable date: '" + s + "'");
        Date dt{y, m, d};
        if (m < 1 || m > 12 || d < 1 || d > 31 ||
            Date::from_rata_die(dt.rata_die()) != dt)
            throw ArbError(ErrorKind::Data, "invalid calendar date: '" + s + "'");
        return dt;
    }
};

inline long long days_between(const Date& a, const Date& b) {
    return b.rata_die() - a.rata_die();
}

}  // namespace arb

#endif
