#ifndef ARB_SYNTHETIC_HPP
#define ARB_SYNTHETIC_HPP

#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "arb/date.hpp"
#include "arb/prices.hpp"

namespace arb {

// Deterministic synthetic day-ahead price series with the gross features of
// the 2022 European markets: seasonal level with a late-summer spike, double
// daily peak with a midday dip, day-to-day level persistence, and per-day
// distortion of the intraday shape so that very short forecast windows
// overfit. Not real market data; used for demos and self-contained tests.
inline PriceSeries synthetic_price_series(const std::string& country,
                                          const Date& start, int n_days,
                                          std::uint64_t seed = 20220101) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto bump = [](double h, double center, double width) {
        const double d = (h - center) / width;
        return std::exp(-d * d);
    };

    PriceSeries s;
    s.country = country;
    double level_noise = 0.0;
    for (int d = 0; d < n_days; ++d) {
        const Date date = start.plus_days(d);
        const int doy = static_cast<int>(days_between(Date{date.year, 1, 1}, date));
        const double seasonal = 170.0 + 55.0 * std::sin(2 * M_PI * (doy - 30) / 365.0) +
                                130.0 * bump(doy, 240.0, 55.0);
        level_noise = 0.86 * level_noise + 30.0 * gauss(rng);
        const double level = seasonal + level_noise;

        // Per-day jitter of the intraday bumps.
        const double am = 0.20 * (1.0 + 0.80 * gauss(rng));
        const double pm = 0.26 * (1.0 + 0.80 * gauss(rng));
        const double dip = 0.24 * (1.0 + 0.65 * gauss(rng));
        const double night = 0.30 * (1.0 + 0.50 * gauss(rng));
        // Occasional days whose peaks shift by a few hours, which rolling
        // hourly-mean forecasts cannot anticipate.
        const double shift = (std::uniform_real_distribution<double>(0, 1)(rng) < 0.20)
                                 ? 2.0 * gauss(rng)
                                 : 0.0;

        s.days.push_back(date);
        std::array<double, 24> row{};
        for (int h = 0; h < 24; ++h) {
            const double shape = 1.0 + am * bump(h, 8.0 + shift, 2.2) +
                                 pm * bump(h, 19.0 + shift, 2.5) -
                                 dip * bump(h, 14.0 + shift, 3.2) -
                                 night * bump(h, 3.0, 3.5);
            row[h] = level * shape + 14.0 * gauss(rng);
        }
        s.prices.push_back(row);
    }
    return s;
}

inline void write_price_csv(const PriceSeries& s, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), ErrorKind::Data, "cannot write price CSV: " + path);
    out << "datetime,country,price_eur_mwh\n";
    char buf[64];
    for (size_t d = 0; d < s.days.size(); ++d)
        for (int h = 0; h < 24; ++h) {
            std::snprintf(buf, sizeof buf, "%sT%02d:00:00Z,%s,%.4f\n",
                          s.days[d].to_string().c_str(), h, s.country.c_str(),
                          s.prices[d][h]);
            out << buf;
        }
}

}  // namespace arb

#endif
