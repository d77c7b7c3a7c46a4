#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config_io.hpp"
#include "extensions.hpp"
#include "montecarlo.hpp"

namespace uavcov::cli {

enum ExitCode : int { ok = 0, config_error = 2, numerical_error = 3, infeasible = 4 };

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

inline void write_csv(const Table& t, std::ostream& os)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ",";
            if (const auto* d = std::get_if<double>(&r[i])) os << format_double(*d);
            else if (const auto* s = std::get_if<std::string>(&r[i])) os << csv_field(*s);
        }
        os << "\n";
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Inverse of write_csv: empty fields become empty cells, numeric fields doubles.
inline Table parse_csv(const std::string& text)
{
    Table t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) return t;
    t.columns = split_csv_line(line);
    while (std::getline(in, line)) {
        std::vector<Cell> row;
        for (const auto& f : split_csv_line(line)) {
            if (f.empty()) {
                row.emplace_back(std::monostate{});
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end && *end == '\0')
                row.emplace_back(v);
            else
                row.emplace_back(f);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline nlohmann::json to_json(const Table& t)
{
    auto arr = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json o = nlohmann::json::object();
        for (std::size_t i = 0; i < t.columns.size() && i < r.size(); ++i) {
            if (const auto* d = std::get_if<double>(&r[i])) o[t.columns[i]] = *d;
            else if (const auto* s = std::get_if<std::string>(&r[i])) o[t.columns[i]] = *s;
            else o[t.columns[i]] = nullptr;
        }
        arr.push_back(std::move(o));
    }
    return arr;
}

inline void write_table(const Table& t, const std::string& format, std::ostream& os)
{
    if (format == "json")
        os << to_json(t).dump(2) << "\n";
    else
        write_csv(t, os);
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "-40dB", "-40 dB" or "-40"; the value is always read in dB.
inline double parse_db(const std::string& text)
{
    std::string s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.size() >= 2 && (s.compare(s.size() - 2, 2, "dB") == 0 || s.compare(s.size() - 2, 2, "db") == 0))
        s.erase(s.size() - 2);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    while (end && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (s.empty() || !end || *end != '\0') throw UsageError("not a dB value: '" + text + "'");
    return v;
}

struct Options {
    std::string config_path;
    std::vector<std::string> metrics;
    std::uint64_t trials = 0;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
    std::string gamma_e = "-40dB";
    std::string gamma_sinr = "0dB";
    std::string gamma_ul = "-20dB";
    std::optional<double> rho, tau;
    bool noise_limited = false;
    bool constant_thinning = false;
    std::optional<unsigned> threads;
    std::optional<int> gamma_order;
    // sweep
    std::string param;
    std::vector<double> values;
    // optimize
    std::string target = "tau";
    double r_min = 0.0;
    double from = 0.0, to = 100.0, step = 5.0;
    std::ostream* diag = &std::cerr;  // warnings
};

// One evaluation point: everything a metric needs, in linear units.
struct Point {
    NetworkConfig cfg;
    AnalysisSettings st;
    double gamma_e_db = -40, gamma_sinr_db = 0, gamma_ul_db = -20;
    double tau = 1.0, rho = 0.5;
    double gamma_e() const { return db_to_linear(gamma_e_db); }
    double gamma_sinr() const { return db_to_linear(gamma_sinr_db); }
    double gamma_ul() const { return db_to_linear(gamma_ul_db); }
};

inline Point make_point(const Options& o)
{
    Point p;
    if (!o.config_path.empty()) {
        auto f = load_scenario(o.config_path);
        p.cfg = f.config;
        p.st = f.settings;
    }
    if (o.seed) p.st.mc_seed = *o.seed;
    if (o.threads) p.st.threads = *o.threads;
    if (o.gamma_order) p.st.gamma_order = *o.gamma_order;
    if (o.noise_limited) p.st.interference = false;
    if (o.constant_thinning) p.st.uplink_thinning = UplinkThinning::constant;
    if (o.trials) p.st.mc_trials = o.trials;
    p.gamma_e_db = parse_db(o.gamma_e);
    p.gamma_sinr_db = parse_db(o.gamma_sinr);
    p.gamma_ul_db = parse_db(o.gamma_ul);
    if (o.rho) p.cfg.rho = *o.rho;
    if (o.tau) p.cfg.tau = *o.tau;
    p.rho = p.cfg.rho;
    p.tau = p.cfg.tau;
    validate(p.cfg, p.st);
    return p;
}

inline const std::vector<std::string>& eval_columns()
{
    static const std::vector<std::string> c{"metric",      "tier",         "tier_kind",   "state",  "gammaE_dB",
                                            "gammaSINR_dB", "gammaUL_dB",  "tau_s",       "rho",    "unit",
                                            "analytic",    "mc",           "mc_half_width", "abs_diff", "trials"};
    return c;
}

inline std::string tier_kind(const Scenario& sc, std::size_t j)
{
    switch (sc[j].kind) {
    case TierKind::cluster: return "cluster";
    case TierKind::ground: return "gbs";
    default: return sc.size() > 3 ? "uav" + std::to_string(j) : "uav";
    }
}

inline const std::vector<std::string>& known_metrics()
{
    static const std::vector<std::string> m{"association", "energy", "sinr",       "stp",
                                            "iccdf",       "active", "uplink",     "throughput"};
    return m;
}

// Rows for one point. MC columns are filled when the point asks for trials.
inline std::vector<std::vector<Cell>> evaluate(const Point& p, const std::vector<std::string>& metrics,
                                              std::ostream& warn = std::cerr)
{
    for (const auto& name : metrics)
        if (std::find(known_metrics().begin(), known_metrics().end(), name) == known_metrics().end())
            throw UsageError("unknown metric '" + name + "'");
    NetworkModel m(p.cfg, p.st);
    const Scenario& sc = m.scenario();
    const auto a = association_probabilities(m);
    const std::uint64_t trials = p.st.mc_trials;
    auto has = [&](const char* n) { return std::find(metrics.begin(), metrics.end(), n) != metrics.end(); };

    std::optional<McDownlinkResult> dl;
    if (trials > 0 && (has("association") || has("energy") || has("sinr") || has("stp") || has("iccdf"))) {
        McDownlinkRequest req;
        req.gamma_e = p.gamma_e();
        req.gamma_sinr = p.gamma_sinr();
        req.tau = p.tau;
        req.rho = p.rho;
        req.ccdf_args.push_back(stp_threshold(p.cfg, p.gamma_e(), p.gamma_sinr(), p.tau, p.rho));
        dl = simulate_downlink(p.cfg, p.st, req);
        for (const auto& w : dl->warnings) warn << "warning: " << w << "\n";
    }

    std::vector<std::vector<Cell>> rows;
    auto row = [&](const std::string& metric, std::optional<std::size_t> j, std::optional<LinkState> s,
                   const char* unit, double value, const TrialEstimate* mc) {
        std::vector<Cell> r;
        r.emplace_back(metric);
        if (j) {
            r.emplace_back(static_cast<double>(*j));
            r.emplace_back(tier_kind(sc, *j));
        } else {
            r.emplace_back(std::monostate{});
            r.emplace_back(std::string("total"));
        }
        if (s) r.emplace_back(std::string(to_string(*s)));
        else r.emplace_back(std::monostate{});
        r.emplace_back(p.gamma_e_db);
        r.emplace_back(p.gamma_sinr_db);
        r.emplace_back(p.gamma_ul_db);
        r.emplace_back(p.tau);
        r.emplace_back(p.rho);
        r.emplace_back(std::string(unit));
        r.emplace_back(value);
        if (mc) {
            r.emplace_back(mc->value);
            r.emplace_back(mc->half_width);
            r.emplace_back(std::abs(value - mc->value));
            r.emplace_back(static_cast<double>(mc->n));
        } else {
            for (int i = 0; i < 4; ++i) r.emplace_back(std::monostate{});
        }
        rows.push_back(std::move(r));
    };
    auto per_tier = [&](const std::string& name, const TierStateValues& v, const TrialEstimate* total_mc) {
        for (std::size_t j = 0; j < m.tier_count(); ++j)
            for (auto s : link_states) row(name, j, s, "prob", v.joint[j][static_cast<int>(s)], nullptr);
        row(name, std::nullopt, std::nullopt, "prob", v.total, total_mc);
    };

    if (has("association"))
        for (std::size_t j = 0; j < m.tier_count(); ++j)
            for (auto s : link_states)
                row("association", j, s, "prob", a(j, s), dl ? &dl->association[j][static_cast<int>(s)] : nullptr);

    const bool need_dl = has("energy") || has("sinr") || has("stp");
    if (need_dl && !p.st.interference) {
        const auto r = noise_limited_stp(m, a, p.rho, p.tau, p.gamma_e(), p.gamma_sinr());
        if (has("energy")) per_tier("energy", r.energy, dl ? &dl->energy : nullptr);
        if (has("sinr")) per_tier("sinr", r.sinr, dl ? &dl->sinr : nullptr);
        if (has("stp")) per_tier("stp", r.stp, dl ? &dl->stp : nullptr);
    } else if (need_dl) {
        const auto r = successful_transmission(m, a, p.gamma_e(), p.gamma_sinr(), p.tau, p.rho);
        if (has("energy")) per_tier("energy", r.energy, dl ? &dl->energy : nullptr);
        if (has("sinr")) per_tier("sinr", r.sinr, dl ? &dl->sinr : nullptr);
        if (has("stp")) per_tier("stp", r.stp, dl ? &dl->stp : nullptr);
    }
    if (has("iccdf")) {
        const double w = stp_threshold(p.cfg, p.gamma_e(), p.gamma_sinr(), p.tau, p.rho);
        per_tier("iccdf", interference_ccdf(m, a, w), dl ? &dl->ccdf[0] : nullptr);
    }

    double p_active = -1.0;
    if (has("active") || has("uplink") || has("throughput")) p_active = active_probability(m, a, p.tau, p.rho);
    std::optional<McUplinkResult> ul;
    if (trials > 0 && (has("active") || has("uplink"))) {
        McUplinkRequest req;
        req.gamma_ul = p.gamma_ul();
        req.tau = p.tau;
        req.rho = p.rho;
        ul = simulate_uplink(p.cfg, p.st, req);
    }
    if (has("active")) row("active", 0, std::nullopt, "prob", p_active, ul ? &ul->p_active : nullptr);
    if (has("uplink")) {
        const double cov = uplink_sinr_coverage(m, make_uplink_context(m, p_active, p.gamma_ul()));
        row("uplink", 0, std::nullopt, "prob", cov, ul ? &ul->coverage : nullptr);
    }
    if (has("throughput")) {
        const double ps = sinr_coverage(m, a, p.gamma_sinr(), p.rho).total;
        const auto t = average_uplink_throughput(m, a, p.tau, p.rho, p.gamma_ul(), ps);
        row("throughput_ul", std::nullopt, std::nullopt, "bit/s", t.rate_ul, nullptr);
        row("throughput_dl", std::nullopt, std::nullopt, "bit/s", t.rate_dl, nullptr);
    }
    return rows;
}

inline bool sweepable(const Point& p, const std::string& name)
{
    if (name == "gammaE_dB" || name == "gammaSINR_dB" || name == "gammaUL_dB") return true;
    const nlohmann::json j = to_json(p.cfg);
    return j.contains(name) && j[name].is_number();
}

// Applies one swept value. Threshold names take dB; anything else is a scenario-file key.
inline void apply_param(Point& p, const std::string& name, double v)
{
    if (name == "gammaE_dB") p.gamma_e_db = v;
    else if (name == "gammaSINR_dB") p.gamma_sinr_db = v;
    else if (name == "gammaUL_dB") p.gamma_ul_db = v;
    else {
        if (!sweepable(p, name)) throw UsageError("cannot sweep '" + name + "': not a numeric scenario key");
        nlohmann::json j = to_json(p.cfg);
        j[name] = v;
        p.cfg = from_json(j, {p.cfg, p.st}).config;
        if (name == "rho") p.rho = v;
        if (name == "tau") p.tau = v;
    }
}

inline Table cmd_eval(const Options& o)
{
    const Point p = make_point(o);
    Table t;
    t.columns = eval_columns();
    t.rows = evaluate(p, o.metrics.empty() ? std::vector<std::string>{"stp"} : o.metrics, *o.diag);
    return t;
}

inline Table cmd_sweep(const Options& o)
{
    if (o.param.empty()) throw UsageError("sweep needs --param");
    if (o.values.empty()) throw UsageError("sweep needs a nonempty --values grid");
    if (!std::is_sorted(o.values.begin(), o.values.end())) throw UsageError("--values must be sorted ascending");
    const Point base = make_point(o);
    if (!sweepable(base, o.param)) throw UsageError("cannot sweep '" + o.param + "': not a numeric scenario key");
    const auto metrics = o.metrics.empty() ? std::vector<std::string>{"stp"} : o.metrics;
    const unsigned workers = resolve_threads(base.st.threads, o.values.size());
    std::vector<std::string> warnings(o.values.size());
    auto rows_at = [&](std::size_t i) {
        std::vector<std::vector<Cell>> rows;
        std::ostringstream warn;
        Point p = base;
        if (workers > 1) p.st.threads = 1;
        try {
            apply_param(p, o.param, o.values[i]);
            rows = evaluate(p, metrics, warn);
            for (auto& r : rows) r.emplace_back(std::monostate{});
        } catch (const std::exception& e) {
            std::vector<Cell> r(eval_columns().size(), std::monostate{});
            r[0] = std::string("error");
            r.emplace_back(std::string(e.what()));
            rows.push_back(std::move(r));
        }
        for (auto& r : rows) {
            r.insert(r.begin(), Cell{o.values[i]});
            r.insert(r.begin(), Cell{o.param});
        }
        warnings[i] = warn.str();
        return rows;
    };
    const auto parts = parallel_map<std::vector<std::vector<Cell>>>(o.values.size(), workers, rows_at);
    for (const auto& w : warnings) *o.diag << w;
    Table t;
    t.columns = {"param", "param_value"};
    t.columns.insert(t.columns.end(), eval_columns().begin(), eval_columns().end());
    t.columns.push_back("error");
    for (const auto& part : parts) t.rows.insert(t.rows.end(), part.begin(), part.end());
    return t;
}

inline Table cmd_optimize(const Options& o)
{
    const Point p = make_point(o);
    Table t;
    t.columns = {"target", "kind", "value", "objective", "objective_unit", "feasible", "rate_dl_bps", "note"};
    auto add = [&](const char* kind, double v, double obj, const char* unit, bool feas, std::optional<double> dl,
                   const std::string& note) {
        t.rows.push_back({o.target, std::string(kind), v, obj, std::string(unit), feas ? 1.0 : 0.0,
                          dl ? Cell{*dl} : Cell{std::monostate{}}, note.empty() ? Cell{std::monostate{}} : Cell{note}});
    };
    if (o.target == "tau") {
        NetworkModel m(p.cfg, p.st);
        const auto a = association_probabilities(m);
        const auto r = optimize_tau(m, a, p.rho, p.gamma_ul(), p.gamma_sinr(), o.r_min);
        if (!r.feasible) throw Infeasible(r.binding);
        for (const auto& x : r.trace) add("trace", x.tau, x.rate_ul, "bit/s", x.feasible, x.rate_dl, "");
        add("optimum", r.best.tau, r.best.rate_ul, "bit/s", true, r.best.rate_dl,
            "tau_min=" + format_double(r.tau_min));
    } else if (o.target == "rho") {
        double rs;
        try {
            rs = optimal_rho(p.tau, p.gamma_e(), p.gamma_sinr(), p.cfg);
        } catch (const NoInteriorOptimum& e) {
            throw Infeasible(std::string("power split: ") + e.what());
        }
        AnalysisSettings st = without_interference(p.st);
        NetworkModel m(p.cfg, st);
        const auto a = association_probabilities(m);
        for (int i = 1; i <= 99; ++i) {
            const double rho = 0.01 * i;
            add("trace", rho, noise_limited_stp(m, a, rho, p.tau, p.gamma_e(), p.gamma_sinr()).stp.total, "prob", true,
                std::nullopt, "");
        }
        add("optimum", rs, noise_limited_stp(m, a, rs, p.tau, p.gamma_e(), p.gamma_sinr()).stp.total, "prob", true,
            std::nullopt, "noise-limited root");
    } else if (o.target == "H") {
        if (!(o.step > 0) || o.to < o.from) throw UsageError("need --from <= --to and --step > 0");
        double best_h = o.from, best = -1.0;
        for (double h = o.from; h <= o.to + 1e-9 * o.step; h += o.step) {
            Point q = p;
            q.cfg.uav_height = h;
            for (auto& l : q.cfg.uav_tiers) l.height = h;
            NetworkModel m(q.cfg, q.st);
            const double v = successful_transmission(m, q.gamma_e(), q.gamma_sinr(), q.tau, q.rho).stp.total;
            add("trace", h, v, "prob", true, std::nullopt, "");
            if (v > best) {
                best = v;
                best_h = h;
            }
        }
        add("optimum", best_h, best, "prob", true, std::nullopt, "grid search");
    } else {
        throw UsageError("--target must be tau, rho or H");
    }
    return t;
}

inline Table cmd_simulate(const Options& o)
{
    Point p = make_point(o);
    if (!p.st.mc_trials) p.st.mc_trials = mc_default_trials;
    const auto metrics = o.metrics.empty() ? std::vector<std::string>{"association", "energy", "sinr", "stp"} : o.metrics;
    Table t;
    t.columns = {"metric", "tier", "state", "mc", "mc_half_width", "trials", "seed"};
    const Scenario sc = make_scenario(p.cfg);
    auto has = [&](const char* n) { return std::find(metrics.begin(), metrics.end(), n) != metrics.end(); };
    auto add = [&](const std::string& name, Cell tier, Cell state, const TrialEstimate& e) {
        t.rows.push_back({name, tier, state, e.value, e.half_width, static_cast<double>(e.n),
                          static_cast<double>(p.st.mc_seed)});
    };
    if (has("association") || has("energy") || has("sinr") || has("stp")) {
        McDownlinkRequest req;
        req.gamma_e = p.gamma_e();
        req.gamma_sinr = p.gamma_sinr();
        req.tau = p.tau;
        req.rho = p.rho;
        const auto r = simulate_downlink(p.cfg, p.st, req);
        for (const auto& w : r.warnings) *o.diag << "warning: " << w << "\n";
        if (has("association"))
            for (std::size_t j = 0; j < sc.size(); ++j)
                for (auto s : link_states)
                    add("association", Cell{static_cast<double>(j)}, Cell{std::string(to_string(s))},
                        r.association[j][static_cast<int>(s)]);
        if (has("energy")) add("energy", std::monostate{}, std::monostate{}, r.energy);
        if (has("sinr")) add("sinr", std::monostate{}, std::monostate{}, r.sinr);
        if (has("stp")) add("stp", std::monostate{}, std::monostate{}, r.stp);
    }
    if (has("active") || has("uplink")) {
        McUplinkRequest req;
        req.gamma_ul = p.gamma_ul();
        req.tau = p.tau;
        req.rho = p.rho;
        const auto r = simulate_uplink(p.cfg, p.st, req);
        if (has("active")) add("active", std::monostate{}, std::monostate{}, r.p_active);
        if (has("uplink")) add("uplink", std::monostate{}, std::monostate{}, r.coverage);
    }
    return t;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Coverage analysis for UAV-assisted mmWave networks with clustered users"};
    app.require_subcommand(1);
    Options o;
    o.diag = &err;
    auto common = [&](CLI::App* c) {
        c->add_option("--config", o.config_path, "scenario JSON file (flat keys, powers in dBm)");
        c->add_option("--metric", o.metrics, "association|energy|sinr|stp|iccdf|active|uplink|throughput (repeatable)");
        c->add_option("--trials", o.trials, "Monte Carlo trials; 0 = analysis only");
        c->add_option("--seed", o.seed, "Monte Carlo seed");
        c->add_option("--out", o.out, "output path (default stdout)");
        c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        c->add_option("--gammaE", o.gamma_e, "energy threshold in dB (J)");
        c->add_option("--gammaSINR", o.gamma_sinr, "downlink SINR threshold in dB");
        c->add_option("--gammaUL", o.gamma_ul, "uplink SINR threshold in dB");
        c->add_option("--rho", o.rho, "power-splitting ratio");
        c->add_option("--tau", o.tau, "downlink duration in s");
        c->add_flag("--noise-limited", o.noise_limited, "drop all interference");
        c->add_flag("--constant-uplink-thinning", o.constant_thinning,
                    "constant LOS weight for uplink interferers");
        c->add_option("--threads", o.threads, "worker threads (default: all cores)");
        c->add_option("--gamma-order", o.gamma_order, "order of the Gamma indicator approximation");
    };
    auto* eval = app.add_subcommand("eval", "evaluate metrics at one point");
    auto* sweep = app.add_subcommand("sweep", "evaluate metrics over a parameter grid");
    auto* opt = app.add_subcommand("optimize", "optimise tau, rho or H");
    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimates only");
    for (auto* c : {eval, sweep, opt, sim}) common(c);
    sweep->add_option("--param", o.param, "scenario key or gammaE_dB/gammaSINR_dB/gammaUL_dB")->required();
    sweep->add_option("--values", o.values, "sorted grid")->delimiter(',')->required();
    opt->add_option("--target", o.target, "tau, rho or H")->check(CLI::IsMember({"tau", "rho", "H"}));
    opt->add_option("--rmin", o.r_min, "downlink rate floor in bit/s (tau target)");
    opt->add_option("--from", o.from, "H grid start (m)");
    opt->add_option("--to", o.to, "H grid end (m)");
    opt->add_option("--step", o.step, "H grid step (m)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    }

    try {
        Table t;
        if (eval->parsed()) t = cmd_eval(o);
        else if (sweep->parsed()) t = cmd_sweep(o);
        else if (opt->parsed()) t = cmd_optimize(o);
        else t = cmd_simulate(o);
        if (o.out.empty()) {
            write_table(t, o.format, out);
        } else {
            std::ofstream f(o.out);
            if (!f) throw UsageError("cannot write '" + o.out + "'");
            write_table(t, o.format, f);
        }
        return ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    } catch (const Infeasible& e) {
        err << "infeasible: " << e.what() << "\n";
        return infeasible;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_error;
    } catch (const std::domain_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    }
}

}  // namespace uavcov::cli
