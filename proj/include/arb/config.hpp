#ifndef ARB_CONFIG_HPP
#define ARB_CONFIG_HPP

#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "arb/backend.hpp"
#include "arb/battery.hpp"
#include "arb/error.hpp"
#include "arb/model.hpp"
#include "arb/prices.hpp"
#include "arb/simulate.hpp"

#include "json.hpp"

namespace arb {

// Application configuration: a JSON file with `paths`, `battery`, `market`,
// `run`, and `bounds` sections, every key reachable by a dotted path for
// --override flags. Grid costs are accepted in EUR/MWh (vgc) and EUR (fgc)
// and converted when building the run configuration.
struct AppConfig {
    // paths
    std::string prices_csv;
    std::string charge_curve_csv;     // optional; empty = built-in default
    std::string discharge_curve_csv;  // optional; empty = built-in default
    std::string output_dir = ".";

    // battery
    BatteryConfig battery;

    // market
    std::string country = "Germany";
    std::string start = "2022-01-01";
    std::string end = "2022-12-31";
    double vgc_eur_mwh = 5.0;
    double fgc_eur = 0.0;

    // run
    std::string mode = "milp-p";
    int lookback = 28;
    int n_int = 5;
    double rate_scale = 1.0;
    bool degradation = true;
    bool consume_history = true;
    double epsilon_wh = 0.01;
    std::string backend_command;  // empty = built-in solver
    double integrality_tol = 1e-6;
    double rel_gap_tol = 1e-6;
    double time_limit_s = 0.0;  // 0 = unlimited

    // bounds
    std::vector<double> soc_min = std::vector<double>(24, 0.0);
    std::vector<double> soc_max = std::vector<double>(24, 1.0);
    double terminal_soc_max = 0.0;  // applied to soc_max[23]

    void validate() const {
        battery.validate();
        require(!prices_csv.empty(), ErrorKind::Validation,
                "config: paths.prices_csv is required");
        require(soc_min.size() == 24 && soc_max.size() == 24,
                ErrorKind::Validation,
                "config: bounds.soc_min and bounds.soc_max need 24 entries");
        Date::parse(start);
        Date::parse(end);
        (void)parse_mode(mode);
        require(vgc_eur_mwh >= 0 && fgc_eur >= 0, ErrorKind::Validation,
                "config: grid costs must be nonnegative");
        require(terminal_soc_max >= 0 && terminal_soc_max <= 1,
                ErrorKind::Validation,
                "config: terminal_soc_max must be in [0,1]");
        bounds().validate();
        run_config().validate();
    }

    AvailabilityBounds bounds() const {
        AvailabilityBounds b;
        for (int h = 0; h < 24; ++h) {
            b.soc_min[h] = soc_min[h];
            b.soc_max[h] = soc_max[h];
        }
        b.soc_max[23] = std::min(b.soc_max[23], terminal_soc_max);
        return b;
    }

    RunConfig run_config() const {
        RunConfig rc;
        rc.mode = parse_mode(mode);
        rc.lookback = lookback;
        rc.n_int = n_int;
        rc.start = Date::parse(start);
        rc.end = Date::parse(end);
        rc.battery = battery;
        rc.grid = GridCostSchedule::uniform(vgc_eur_mwh, fgc_eur);
        rc.bounds = bounds();
        rc.rate_scale = rate_scale;
        rc.degradation_enabled = degradation;
        rc.consume_history = consume_history;
        rc.epsilon = epsilon_wh;
        rc.solver.integrality_tol = integrality_tol;
        rc.solver.rel_gap_tol = rel_gap_tol;
        if (time_limit_s > 0) rc.solver.time_limit_s = time_limit_s;
        return rc;
    }
};

namespace config_detail {

inline RateCurve load_curve_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::Data, "cannot open curve file: " + path);
    RateCurve curve;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = prices_detail::split_csv_line(line);
        require(fields.size() >= 2, ErrorKind::Data,
                "curve file row needs soc and rate columns: " + line);
        if (header) {
            header = false;
            if (fields[0] == "soc") continue;  // optional header row
        }
        try {
            curve.breakpoints.emplace_back(std::stod(fields[0]),
                                           std::stod(fields[1]));
        } catch (const std::exception&) {
            throw ArbError(ErrorKind::Data, "bad curve row: " + line);
        }
    }
    curve.validate();
    return curve;
}

inline nlohmann::json curve_json(const RateCurve& c) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [s, r] : c.breakpoints) arr.push_back({s, r});
    return arr;
}

inline RateCurve curve_from_json(const nlohmann::json& arr) {
    RateCurve c;
    for (const auto& bp : arr) {
        require(bp.is_array() && bp.size() == 2, ErrorKind::Validation,
                "curve breakpoints must be [soc, rate] pairs");
        c.breakpoints.emplace_back(bp[0].get<double>(), bp[1].get<double>());
    }
    c.validate();
    return c;
}

}  // namespace config_detail

inline nlohmann::json to_json(const AppConfig& c) {
    using config_detail::curve_json;
    return nlohmann::json{
        {"paths",
         {{"prices_csv", c.prices_csv},
          {"charge_curve_csv", c.charge_curve_csv},
          {"discharge_curve_csv", c.discharge_curve_csv},
          {"output_dir", c.output_dir}}},
        {"battery",
         {{"q0_wh", c.battery.q0},
          {"eta0", c.battery.eta0},
          {"cycle_max", c.battery.cycle_max},
          {"q_min_frac", c.battery.q_min_frac},
          {"eta_min_frac", c.battery.eta_min_frac},
          {"e_init_wh", c.battery.e_init},
          {"charge_curve", curve_json(c.battery.charge_curve)},
          {"discharge_curve", curve_json(c.battery.discharge_curve)}}},
        {"market",
         {{"country", c.country},
          {"start", c.start},
          {"end", c.end},
          {"vgc_eur_mwh", c.vgc_eur_mwh},
          {"fgc_eur", c.fgc_eur}}},
        {"run",
         {{"mode", c.mode},
          {"lookback", c.lookback},
          {"n_int", c.n_int},
          {"rate_scale", c.rate_scale},
          {"degradation", c.degradation},
          {"consume_history", c.consume_history},
          {"epsilon_wh", c.epsilon_wh},
          {"backend_command", c.backend_command},
          {"integrality_tol", c.integrality_tol},
          {"rel_gap_tol", c.rel_gap_tol},
          {"time_limit_s", c.time_limit_s}}},
        {"bounds",
         {{"soc_min", c.soc_min},
          {"soc_max", c.soc_max},
          {"terminal_soc_max", c.terminal_soc_max}}}};
}

inline AppConfig config_from_json(const nlohmann::json& j) {
    AppConfig c;
    auto get = [](const nlohmann::json& obj, const char* key, auto& out) {
        if (obj.contains(key)) obj.at(key).get_to(out);
    };
    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        get(p, "prices_csv", c.prices_csv);
        get(p, "charge_curve_csv", c.charge_curve_csv);
        get(p, "discharge_curve_csv", c.discharge_curve_csv);
        get(p, "output_dir", c.output_dir);
    }
    if (j.contains("battery")) {
        const auto& b = j.at("battery");
        get(b, "q0_wh", c.battery.q0);
        get(b, "eta0", c.battery.eta0);
        get(b, "cycle_max", c.battery.cycle_max);
        get(b, "q_min_frac", c.battery.q_min_frac);
        get(b, "eta_min_frac", c.battery.eta_min_frac);
        get(b, "e_init_wh", c.battery.e_init);
        if (b.contains("charge_curve"))
            c.battery.charge_curve =
                config_detail::curve_from_json(b.at("charge_curve"));
        if (b.contains("discharge_curve"))
            c.battery.discharge_curve =
                config_detail::curve_from_json(b.at("discharge_curve"));
    }
    if (j.contains("market")) {
        const auto& m = j.at("market");
        get(m, "country", c.country);
        get(m, "start", c.start);
        get(m, "end", c.end);
        get(m, "vgc_eur_mwh", c.vgc_eur_mwh);
        get(m, "fgc_eur", c.fgc_eur);
    }
    if (j.contains("run")) {
        const auto& r = j.at("run");
        get(r, "mode", c.mode);
        get(r, "lookback", c.lookback);
        get(r, "n_int", c.n_int);
        get(r, "rate_scale", c.rate_scale);
        get(r, "degradation", c.degradation);
        get(r, "consume_history", c.consume_history);
        get(r, "epsilon_wh", c.epsilon_wh);
        get(r, "backend_command", c.backend_command);
        get(r, "integrality_tol", c.integrality_tol);
        get(r, "rel_gap_tol", c.rel_gap_tol);
        get(r, "time_limit_s", c.time_limit_s);
    }
    if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        get(b, "soc_min", c.soc_min);
        get(b, "soc_max", c.soc_max);
        get(b, "terminal_soc_max", c.terminal_soc_max);
    }
    return c;
}

// Applies a `key=value` override with a dotted path into the JSON tree,
// e.g. `market.vgc_eur_mwh=5` or `run.lookback=28`. Values parse as JSON
// when possible (numbers, booleans, arrays) and fall back to strings.
inline void apply_override(nlohmann::json& j, const std::string& spec) {
    const auto eq = spec.find('=');
    require(eq != std::string::npos && eq > 0, ErrorKind::Validation,
            "override must look like key=value: " + spec);
    const std::string path = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);

    nlohmann::json* node = &j;
    std::istringstream parts(path);
    std::string key;
    std::vector<std::string> keys;
    while (std::getline(parts, key, '.')) {
        require(!key.empty(), ErrorKind::Validation,
                "override path has an empty segment: " + path);
        keys.push_back(key);
    }
    for (size_t i = 0; i + 1 < keys.size(); ++i) node = &(*node)[keys[i]];

    nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;  // plain string
    (*node)[keys.back()] = value;
}

inline AppConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {}) {
    nlohmann::json j;
    if (!path.empty()) {
        std::ifstream in(path);
        require(in.good(), ErrorKind::Data, "cannot open config file: " + path);
        j = nlohmann::json::parse(in, nullptr, false);
        require(!j.is_discarded(), ErrorKind::Data,
                "config file is not valid JSON: " + path);
    } else {
        j = nlohmann::json::object();
    }
    for (const auto& o : overrides) apply_override(j, o);
    AppConfig c = config_from_json(j);
    if (!c.charge_curve_csv.empty())
        c.battery.charge_curve = config_detail::load_curve_csv(c.charge_curve_csv);
    if (!c.discharge_curve_csv.empty())
        c.battery.discharge_curve =
            config_detail::load_curve_csv(c.discharge_curve_csv);
    return c;
}

inline std::string dump_config(const AppConfig& c) {
    return to_json(c).dump(2) + "\n";
}

}  // namespace arb

#endif
