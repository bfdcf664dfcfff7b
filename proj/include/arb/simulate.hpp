#ifndef ARB_SIMULATE_HPP
#define ARB_SIMULATE_HPP

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arb/battery.hpp"
#include "arb/bnb.hpp"
#include "arb/error.hpp"
#include "arb/model.hpp"
#include "arb/prices.hpp"
#include "arb/pwl.hpp"

namespace arb {

// Scheduling mode: Predictive plans on forecast prices (MILP-P), Oracle
// plans on the true day-ahead prices (MILP-O).
enum class Mode { Predictive, Oracle };

inline std::string mode_label(Mode m) {
    return m == Mode::Predictive ? "MILP-P" : "MILP-O";
}

inline Mode parse_mode(const std::string& s) {
    if (s == "milp-p" || s == "MILP-P" || s == "predictive") return Mode::Predictive;
    if (s == "milp-o" || s == "MILP-O" || s == "oracle") return Mode::Oracle;
    throw ArbError(ErrorKind::Validation, "unknown mode: " + s +
                                              " (expected milp-p or milp-o)");
}

struct RunConfig {
    Mode mode = Mode::Predictive;
    int lookback = 28;  // forecast window l, in days
    int n_int = 5;
    Date start{};  // first day of the range (inclusive)
    Date end{};    // last day of the range (inclusive)
    BatteryConfig battery;
    GridCostSchedule grid = GridCostSchedule::uniform(5.0, 0.0);
    AvailabilityBounds bounds = AvailabilityBounds::open_with_terminal();
    double rate_scale = 1.0;
    bool degradation_enabled = true;
    // First `lookback` days of the range feed the forecast only (no
    // trading); with false, trading starts immediately with however much
    // history is available (at least one day).
    bool consume_history = true;
    double epsilon = 0.01;  // Wh, minimum nonzero hourly exchange
    SolverOptions solver;

    void validate() const {
        battery.validate();
        require(lookback >= 1, ErrorKind::Validation,
                "run config: lookback window l must be >= 1");
        require(n_int >= 1, ErrorKind::Validation,
                "run config: n_int must be >= 1");
        require(rate_scale > 0, ErrorKind::Validation,
                "run config: rate_scale must be > 0");
        require(days_between(start, end) >= 0, ErrorKind::Validation,
                "run config: empty date range");
    }
};

struct DayResult {
    Date date{};
    Schedule schedule;
    double forecast_profit = 0.0;  // EUR, against the planning prices
    double realized_profit = 0.0;  // EUR, against the actual prices
    double mae = 0.0;              // EUR/MWh, forecast error (MILP-P only)
    double cycles_used = 0.0;      // this day's sum |E| / (2 Q0)
    double q_start = 0.0;          // Wh, capacity used for the day's solve
    double eta_start = 0.0;        // efficiency used for the day's solve
};

struct RunSummary {
    Mode mode = Mode::Predictive;
    int lookback = 0;
    std::vector<DayResult> days;
    double avg_daily_profit = 0.0;  // EUR, realized
    double total_profit = 0.0;      // EUR, realized
    double total_cycles = 0.0;
    int negative_profit_days = 0;
    double mean_mae = 0.0;  // EUR/MWh
    BatteryState final_state;

    void recompute_aggregates() {
        total_profit = 0.0;
        total_cycles = 0.0;
        negative_profit_days = 0;
        mean_mae = 0.0;
        for (const DayResult& d : days) {
            total_profit += d.realized_profit;
            total_cycles += d.cycles_used;
            if (d.realized_profit < 0.0) ++negative_profit_days;
            mean_mae += d.mae;
        }
        const double n = days.empty() ? 1.0 : double(days.size());
        avg_daily_profit = total_profit / n;
        mean_mae /= n;
    }
};

using SolveFn = std::function<Solution(const MilpInstance&)>;

// Day-by-day backtest. Strictly sequential: each day's capacity and
// efficiency depend on every previous day's traded energy.
inline RunSummary run(const RunConfig& cfg, const PriceSeries& series,
                      const SolveFn& solve_fn = {}) {
    cfg.validate();
    auto i_start = series.index_of(cfg.start);
    auto i_end = series.index_of(cfg.end);
    require(i_start.has_value() && i_end.has_value(), ErrorKind::Data,
            "run: date range not covered by the price series");
    require(*i_start <= *i_end, ErrorKind::Validation, "run: empty date range");

    size_t first = *i_start;
    if (cfg.consume_history) {
        first += size_t(cfg.lookback);
        require(first <= *i_end, ErrorKind::Validation,
                "run: range shorter than the forecast window l");
    } else if (cfg.mode == Mode::Predictive && first == 0) {
        first = 1;  // at least one history day is needed to forecast
        require(first <= *i_end, ErrorKind::Validation,
                "run: no history available before the range");
    }

    const PwlTable table = build_table(cfg.battery, cfg.n_int, cfg.rate_scale);
    BatteryState st = BatteryState::initial(cfg.battery);

    RunSummary out;
    out.mode = cfg.mode;
    out.lookback = cfg.lookback;
    for (size_t i = first; i <= *i_end; ++i) {
        const DayPrices actual{series.days[i], series.prices[i],
                               PriceKind::Actual};
        DayPrices planning = actual;
        if (cfg.mode == Mode::Predictive) {
            const int window = cfg.consume_history
                                   ? cfg.lookback
                                   : int(std::min<size_t>(i, size_t(cfg.lookback)));
            planning = forecast(series, actual.date, window);
        }

        DayProblem p = DayProblem::from_day(planning, cfg.grid, cfg.bounds,
                                            table, st.q, st.eta,
                                            cfg.battery.e_init, cfg.battery.q0,
                                            cfg.epsilon);
        MilpInstance inst = build_milp(p);
        Solution sol = solve_fn ? solve_fn(inst) : solve(inst, cfg.solver);
        require(sol.status == SolveStatus::Optimal ||
                    sol.status == SolveStatus::Feasible,
                ErrorKind::Solver,
                "run: solve failed on " + actual.date.to_string());

        DayResult day;
        day.date = actual.date;
        day.schedule = extract_schedule(p, sol);
        day.q_start = st.q;
        day.eta_start = st.eta;
        day.forecast_profit = schedule_profit(day.schedule, p.price_eur_mwh,
                                              p.eta, p.vgc, p.fgc, p.epsilon);
        DayProblem actual_p = p;
        actual_p.price_eur_mwh.assign(actual.values.begin(), actual.values.end());
        day.realized_profit =
            schedule_profit(day.schedule, actual_p.price_eur_mwh, p.eta, p.vgc,
                            p.fgc, p.epsilon);
        day.mae = cfg.mode == Mode::Predictive ? mae(planning, actual) : 0.0;

        double e_day = 0.0;
        for (double e : day.schedule.energy_wh) e_day += std::fabs(e);
        day.cycles_used = e_day / (2.0 * cfg.battery.q0);
        if (cfg.degradation_enabled) {
            st = update_degradation(st, cfg.battery, e_day);
        } else {
            st.day += 1;
            st.n_cycles += e_day / (2.0 * cfg.battery.q0);
            st.cum_energy_exchanged += e_day;
        }
        out.days.push_back(std::move(day));
    }
    out.final_state = st;
    out.recompute_aggregates();
    return out;
}

struct ComparisonReport {
    double p_total = 0.0;
    double o_total = 0.0;
    double total_rel_diff = 0.0;  // (p_total - o_total) / o_total
    std::vector<double> per_day_rel_diff;
};

inline ComparisonReport compare(const RunSummary& p_run,
                                const RunSummary& o_run) {
    require(p_run.days.size() == o_run.days.size(), ErrorKind::Validation,
            "compare: runs cover different numbers of days");
    ComparisonReport rep;
    rep.p_total = p_run.total_profit;
    rep.o_total = o_run.total_profit;
    rep.total_rel_diff = o_run.total_profit == 0.0
                             ? 0.0
                             : (p_run.total_profit - o_run.total_profit) /
                                   o_run.total_profit;
    rep.per_day_rel_diff.reserve(p_run.days.size());
    for (size_t i = 0; i < p_run.days.size(); ++i) {
        const DayResult& pd = p_run.days[i];
        const DayResult& od = o_run.days[i];
        require(days_between(pd.date, od.date) == 0, ErrorKind::Validation,
                "compare: date mismatch at " + pd.date.to_string());
        rep.per_day_rel_diff.push_back(
            od.realized_profit == 0.0
                ? 0.0
                : (pd.realized_profit - od.realized_profit) /
                      od.realized_profit);
    }
    return rep;
}

// Re-solves the oracle problem from the predictive run's battery state on
// every `stride`-th day and returns the worst (most negative) margin of
// oracle optimum minus predictive realized profit. A dominance-respecting
// run yields a value >= -tolerance.
inline double dominance_audit(const RunConfig& cfg, const PriceSeries& series,
                              const RunSummary& p_run, int stride = 1,
                              const SolveFn& solve_fn = {}) {
    require(stride >= 1, ErrorKind::Validation, "dominance_audit: stride >= 1");
    const PwlTable table = build_table(cfg.battery, cfg.n_int, cfg.rate_scale);
    double worst = kInf;
    for (size_t i = 0; i < p_run.days.size(); i += size_t(stride)) {
        const DayResult& day = p_run.days[i];
        const DayPrices actual = series.day_prices(day.date);
        DayProblem p = DayProblem::from_day(actual, cfg.grid, cfg.bounds,
                                            table, day.q_start, day.eta_start,
                                            cfg.battery.e_init, cfg.battery.q0,
                                            cfg.epsilon);
        MilpInstance inst = build_milp(p);
        Solution sol = solve_fn ? solve_fn(inst) : solve(inst, cfg.solver);
        require(sol.status == SolveStatus::Optimal, ErrorKind::Solver,
                "dominance_audit: solve failed on " + day.date.to_string());
        worst = std::min(worst, -sol.objective - day.realized_profit);
    }
    return worst;
}

inline const char* results_header() {
    return "date, mode, l, forecast_profit_eur, realized_profit_eur, "
           "mae_eur_mwh, cycles_used, q_wh, eta";
}

inline void emit_results(const RunSummary& summary, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), ErrorKind::Data, "cannot write results CSV: " + path);
    out << results_header() << "\n";
    char buf[256];
    for (const DayResult& d : summary.days) {
        std::snprintf(buf, sizeof buf,
                      "%s, %s, %d, %.6f, %.6f, %.6f, %.9f, %.6f, %.9f\n",
                      d.date.to_string().c_str(),
                      mode_label(summary.mode).c_str(), summary.lookback,
                      d.forecast_profit, d.realized_profit, d.mae,
                      d.cycles_used, d.q_start, d.eta_start);
        out << buf;
    }
    require(out.good(), ErrorKind::Data, "write failed: " + path);
}

inline RunSummary load_results(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::Data, "cannot open results CSV: " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorKind::Data,
            "results CSV is empty: " + path);

    RunSummary out;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) {
            const size_t a = field.find_first_not_of(" \t\r");
            const size_t b = field.find_last_not_of(" \t\r");
            fields.push_back(a == std::string::npos
                                 ? ""
                                 : field.substr(a, b - a + 1));
        }
        require(fields.size() == 9, ErrorKind::Data,
                "results CSV: bad row in " + path + ": " + line);
        DayResult d;
        d.date = Date::parse(fields[0]);
        const Mode mode = parse_mode(fields[1]);
        const int lookback = std::stoi(fields[2]);
        if (first) {
            out.mode = mode;
            out.lookback = lookback;
            first = false;
        } else {
            require(mode == out.mode && lookback == out.lookback,
                    ErrorKind::Data, "results CSV: mixed runs in " + path);
        }
        d.forecast_profit = std::stod(fields[3]);
        d.realized_profit = std::stod(fields[4]);
        d.mae = std::stod(fields[5]);
        d.cycles_used = std::stod(fields[6]);
        d.q_start = std::stod(fields[7]);
        d.eta_start = std::stod(fields[8]);
        out.days.push_back(std::move(d));
    }
    out.recompute_aggregates();
    return out;
}

}  // namespace arb

#endif  // ARB_SIMULATE_HPP
