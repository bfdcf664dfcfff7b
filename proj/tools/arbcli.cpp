// Command-line front end for the battery arbitrage toolkit.
//
// Subcommands: simulate, sweep-l, oracle-check, export-mps, plot-data,
// dump-config. Exit codes: 0 success, 1 validation error, 2 data error,
// 3 solver error, 4 internal invariant violation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "arb/backend.hpp"
#include "arb/bnb.hpp"
#include "arb/config.hpp"
#include "arb/model.hpp"
#include "arb/mps.hpp"
#include "arb/oracle.hpp"
#include "arb/prices.hpp"
#include "arb/simulate.hpp"

namespace {

using namespace arb;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
};

// Shorthand override keys for the most common knobs; anything with a dot
// is passed through as an explicit section.key path.
std::string normalize_override(const std::string& spec) {
    static const std::vector<std::pair<std::string, std::string>> aliases = {
        {"vgc=", "market.vgc_eur_mwh="}, {"fgc=", "market.fgc_eur="},
        {"l=", "run.lookback="},         {"lookback=", "run.lookback="},
        {"mode=", "run.mode="},          {"n_int=", "run.n_int="},
        {"rate_scale=", "run.rate_scale="},
        {"degradation=", "run.degradation="},
        {"country=", "market.country="}, {"start=", "market.start="},
        {"end=", "market.end="},         {"prices_csv=", "paths.prices_csv="},
        {"output_dir=", "paths.output_dir="},
    };
    if (spec.find('.') == std::string::npos)
        for (const auto& [from, to] : aliases)
            if (spec.rfind(from, 0) == 0) return to + spec.substr(from.size());
    return spec;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--override", args.overrides,
                    "key=value override, e.g. run.lookback=14 or vgc=5 "
                    "(repeatable)");
}

PriceSeries load_series(const AppConfig& cfg) {
    return load_price_csv(cfg.prices_csv, cfg.country, Date::parse(cfg.start),
                          Date::parse(cfg.end),
                          /*drop_incomplete_boundary_days=*/true);
}

SolveFn make_solve_fn(const AppConfig& cfg) {
    if (cfg.backend_command.empty()) return {};
    BackendConfig bc{cfg.backend_command, cfg.output_dir};
    return [bc](const MilpInstance& inst) { return solve_via_backend(inst, bc); };
}

void print_summary(const RunSummary& s) {
    std::printf("%-8s l=%-3d days=%-4zu avg_daily=%10.2f EUR  total=%12.2f EUR"
                "  cycles=%8.2f  neg_days=%-3d mean_mae=%7.2f EUR/MWh\n",
                mode_label(s.mode).c_str(), s.lookback, s.days.size(),
                s.avg_daily_profit, s.total_profit, s.total_cycles,
                s.negative_profit_days, s.mean_mae);
}

std::string results_path(const AppConfig& cfg, const std::string& stem) {
    return cfg.output_dir + "/" + stem + ".csv";
}

int cmd_simulate(const CommonArgs& args) {
    std::vector<std::string> overrides;
    for (const auto& o : args.overrides)
        overrides.push_back(normalize_override(o));
    const AppConfig cfg = load_config(args.config_path, overrides);
    cfg.validate();
    const PriceSeries series = load_series(cfg);
    const RunSummary summary = run(cfg.run_config(), series, make_solve_fn(cfg));
    std::string stem = "results_" + mode_label(summary.mode);
    if (summary.mode == Mode::Predictive)
        stem += "_l" + std::to_string(summary.lookback);
    const std::string out = results_path(cfg, stem);
    emit_results(summary, out);
    print_summary(summary);
    std::printf("results written to %s\n", out.c_str());
    return 0;
}

int cmd_sweep_l(const CommonArgs& args, std::vector<int> l_values) {
    require(!l_values.empty(), ErrorKind::Validation,
            "sweep-l: at least one --l value is required");
    std::vector<std::string> overrides;
    for (const auto& o : args.overrides)
        overrides.push_back(normalize_override(o));
    const AppConfig cfg = load_config(args.config_path, overrides);
    cfg.validate();
    const PriceSeries series = load_series(cfg);
    const SolveFn solve_fn = make_solve_fn(cfg);

    std::set<int> unique(l_values.begin(), l_values.end());

    RunConfig orc = cfg.run_config();
    orc.mode = Mode::Oracle;
    // Use the largest window as the shared history prefix so every run
    // covers the same trading days and totals are comparable.
    orc.lookback = *unique.rbegin();
    const RunSummary oracle_run = run(orc, series, solve_fn);
    emit_results(oracle_run, results_path(cfg, "results_MILP-O"));
    print_summary(oracle_run);

    const std::string sweep_path = results_path(cfg, "sweep_l");
    std::ofstream sweep(sweep_path);
    require(sweep.good(), ErrorKind::Data, "cannot write " + sweep_path);
    sweep << "l, avg_daily_profit_eur, rel_diff_pct, negative_profit_days, "
             "cycles, mean_mae_eur_mwh\n";
    for (int l : unique) {
        RunConfig prc = cfg.run_config();
        prc.mode = Mode::Predictive;
        prc.lookback = l;
        // Align the trading range with the oracle run regardless of l.
        prc.start = oracle_run.days.empty() ? prc.start
                                            : oracle_run.days.front().date;
        prc.consume_history = false;
        const RunSummary p = run(prc, series, solve_fn);
        emit_results(p, results_path(cfg, "results_MILP-P_l" + std::to_string(l)));
        print_summary(p);
        const ComparisonReport cmp = compare(p, oracle_run);
        char row[160];
        std::snprintf(row, sizeof(row), "%d, %.6f, %.4f, %d, %.6f, %.6f\n", l,
                      p.avg_daily_profit, 100.0 * cmp.total_rel_diff,
                      p.negative_profit_days, p.total_cycles, p.mean_mae);
        sweep << row;
    }
    std::printf("sweep table written to %s\n", sweep_path.c_str());
    return 0;
}

// Random small day problem sized so exhaustive enumeration stays cheap.
DayProblem random_check_problem(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> shape(0, 2);
    int hours = 4, n_int = 2;
    switch (shape(rng)) {
        case 0: hours = 4; n_int = 2; break;
        case 1: hours = 5; n_int = 2; break;
        default: hours = 4; n_int = 3; break;
    }
    std::uniform_real_distribution<double> price(-60.0, 280.0);
    std::uniform_real_distribution<double> rate(0.15, 0.8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    BatteryConfig battery;
    battery.q0 = 1e6;
    battery.charge_curve =
        RateCurve{{{0.0, rate(rng)}, {0.5, rate(rng)}, {1.0, rate(rng)}}};
    battery.discharge_curve =
        RateCurve{{{0.0, rate(rng)}, {0.5, rate(rng)}, {1.0, rate(rng)}}};

    DayProblem p;
    p.date = Date{2022, 6, 1};
    p.hours = hours;
    p.price_eur_mwh.resize(hours);
    for (double& v : p.price_eur_mwh) v = price(rng);
    p.vgc.assign(hours, 5.0 * kEurPerMwhToEurPerWh);
    p.fgc.assign(hours, unit(rng) < 0.3 ? 3.0 * unit(rng) : 0.0);
    p.soc_min.assign(hours, 0.0);
    p.soc_max.assign(hours, 1.0);
    if (unit(rng) < 0.7) p.soc_max[hours - 1] = 0.0;  // empty at the end
    p.table = build_table(battery, n_int);
    p.q = battery.q0;
    p.eta = 0.9 + 0.1 * unit(rng);
    p.e_init = 0.0;
    p.big_m = battery.q0;
    return p;
}

int cmd_oracle_check(std::uint64_t seed, int count) {
    require(count >= 1, ErrorKind::Validation, "oracle-check: count must be >= 1");
    std::mt19937_64 rng(seed);
    int failures = 0;
    std::printf("%-6s %-6s %-6s %14s %14s %12s %s\n", "index", "hours", "n_int",
                "bnb_obj", "enum_obj", "dp_profit", "result");
    for (int i = 0; i < count; ++i) {
        const DayProblem p = random_check_problem(rng);
        const MilpInstance inst = build_milp(p);
        const Solution bnb = solve(inst);
        const Solution exact = enumerate_optimal(inst);
        const double dp = dp_schedule(p, DpConfig{201}).profit;
        bool ok = bnb.status == exact.status;
        if (ok && bnb.status == SolveStatus::Optimal) {
            const double scale = std::max(1.0, std::fabs(exact.objective));
            ok = std::fabs(bnb.objective - exact.objective) <= 1e-6 * scale;
            // DP optimizes over a restricted move set: lower bound only.
            ok = ok && dp <= -bnb.objective + 1e-6 * scale;
        }
        std::printf("%-6d %-6d %-6d %14.6f %14.6f %12.6f %s\n", i, p.hours,
                    p.table.n_int, bnb.objective, exact.objective, dp,
                    ok ? "pass" : "FAIL");
        if (!ok) ++failures;
    }
    if (failures > 0)
        throw ArbError(ErrorKind::Invariant,
                       "oracle-check: " + std::to_string(failures) + " of " +
                           std::to_string(count) + " instances failed (seed " +
                           std::to_string(seed) + ")");
    std::printf("all %d instances pass (seed %llu)\n", count,
                static_cast<unsigned long long>(seed));
    return 0;
}

int cmd_export_mps(const CommonArgs& args, const std::string& date_str,
                   std::string out_path) {
    std::vector<std::string> overrides;
    for (const auto& o : args.overrides)
        overrides.push_back(normalize_override(o));
    const AppConfig cfg = load_config(args.config_path, overrides);
    cfg.validate();
    const Date date = Date::parse(date_str);
    const PriceSeries series = load_series(cfg);
    require(series.index_of(date).has_value(), ErrorKind::Data,
            "export-mps: no price data for " + date.to_string());
    const RunConfig rc = cfg.run_config();
    const PwlTable table = build_table(rc.battery, rc.n_int, rc.rate_scale);
    const DayProblem p = DayProblem::from_day(
        series.day_prices(date), rc.grid, rc.bounds, table, rc.battery.q0,
        rc.battery.eta0, rc.battery.e_init, rc.battery.q0, rc.epsilon);
    if (out_path.empty())
        out_path = cfg.output_dir + "/day_" + date.to_string() + ".mps";
    export_mps(build_milp(p), out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

const std::vector<std::string> kFigureIds = {"profit-daily", "reldiff",
                                             "degradation-delta",
                                             "country-totals"};

int cmd_plot_data(const std::vector<std::string>& results,
                  const std::string& figure, std::string out_path) {
    if (std::find(kFigureIds.begin(), kFigureIds.end(), figure) ==
        kFigureIds.end()) {
        std::string valid;
        for (const auto& id : kFigureIds) valid += (valid.empty() ? "" : ", ") + id;
        throw ArbError(ErrorKind::Validation,
                       "unknown figure id '" + figure + "' (valid: " + valid + ")");
    }
    require(!results.empty(), ErrorKind::Validation,
            "plot-data: at least one --results file is required");
    if (out_path.empty()) out_path = "plot_" + figure + ".csv";
    std::ofstream out(out_path);
    require(out.good(), ErrorKind::Data, "cannot write " + out_path);

    auto label_of = [](const std::string& path) {
        std::string base = path.substr(path.find_last_of('/') + 1);
        const auto dot = base.rfind('.');
        return dot == std::string::npos ? base : base.substr(0, dot);
    };

    if (figure == "profit-daily") {
        const RunSummary s = load_results(results[0]);
        out << "date, realized_profit_eur\n";
        for (const DayResult& d : s.days)
            out << d.date.to_string() << ", " << d.realized_profit << "\n";
    } else if (figure == "reldiff" || figure == "degradation-delta") {
        require(results.size() == 2, ErrorKind::Validation,
                "plot-data " + figure + ": exactly two --results files "
                "(variant then baseline) are required");
        const RunSummary a = load_results(results[0]);
        const RunSummary b = load_results(results[1]);
        const ComparisonReport cmp = compare(a, b);
        out << "date, variant_profit_eur, baseline_profit_eur, rel_diff\n";
        for (size_t i = 0; i < a.days.size(); ++i)
            out << a.days[i].date.to_string() << ", "
                << a.days[i].realized_profit << ", "
                << b.days[i].realized_profit << ", " << cmp.per_day_rel_diff[i]
                << "\n";
    } else {  // country-totals
        out << "label, total_profit_eur, avg_daily_profit_eur, days\n";
        for (const std::string& path : results) {
            const RunSummary s = load_results(path);
            out << label_of(path) << ", " << s.total_profit << ", "
                << s.avg_daily_profit << ", " << s.days.size() << "\n";
        }
    }
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_dump_config(const CommonArgs& args) {
    std::vector<std::string> overrides;
    for (const auto& o : args.overrides)
        overrides.push_back(normalize_override(o));
    const AppConfig cfg = load_config(args.config_path, overrides);
    std::fputs(dump_config(cfg).c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Battery energy-arbitrage scheduling toolkit"};
    app.require_subcommand(1);

    CommonArgs sim_args, sweep_args, mps_args, dump_args;
    std::vector<int> l_values;
    std::uint64_t seed = 1;
    int count = 200;
    std::string date_str, out_path, figure;
    std::vector<std::string> results_files;

    CLI::App* sim = app.add_subcommand(
        "simulate", "Run one backtest (MILP-P or MILP-O) and write results");
    add_common(sim, sim_args);
    std::string sim_mode;
    int sim_l = 0;
    sim->add_option("--mode", sim_mode, "milp-p or milp-o");
    sim->add_option("--l", sim_l, "forecast lookback window in days");

    CLI::App* sweep = app.add_subcommand(
        "sweep-l", "Run MILP-P for several lookback windows plus one MILP-O");
    add_common(sweep, sweep_args);
    sweep->add_option("--l", l_values, "lookback windows (repeatable)")
        ->required();

    CLI::App* check = app.add_subcommand(
        "oracle-check", "Cross-check the solver against exhaustive enumeration");
    check->add_option("--seed", seed, "random seed");
    check->add_option("--count", count, "number of random instances");

    CLI::App* mps = app.add_subcommand("export-mps",
                                       "Export one day's model as an MPS file");
    add_common(mps, mps_args);
    mps->add_option("--date", date_str, "day to export (YYYY-MM-DD)")->required();
    mps->add_option("--out", out_path, "output path");

    CLI::App* plot = app.add_subcommand(
        "plot-data", "Emit tidy CSV series for plotting from results files");
    plot->add_option("--results", results_files, "results CSV (repeatable)")
        ->required();
    plot->add_option("--figure", figure, "figure id")->required();
    plot->add_option("--out", out_path, "output path");

    CLI::App* dump = app.add_subcommand(
        "dump-config", "Print the effective configuration as JSON");
    add_common(dump, dump_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            if (!sim_mode.empty())
                sim_args.overrides.push_back("run.mode=" + sim_mode);
            if (sim->count("--l"))
                sim_args.overrides.push_back("run.lookback=" +
                                             std::to_string(sim_l));
            return cmd_simulate(sim_args);
        }
        if (sweep->parsed()) return cmd_sweep_l(sweep_args, l_values);
        if (check->parsed()) return cmd_oracle_check(seed, count);
        if (mps->parsed()) return cmd_export_mps(mps_args, date_str, out_path);
        if (plot->parsed()) return cmd_plot_data(results_files, figure, out_path);
        if (dump->parsed()) return cmd_dump_config(dump_args);
    } catch (const arb::ArbError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    }
    return 0;
}
