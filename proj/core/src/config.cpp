#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

#include "eitcool/constants.hpp"
#include "eitcool/effective_ops.hpp"
#include "eitcool/errors.hpp"
#include "eitcool/scenario.hpp"

namespace eitcool {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_plain(std::string_view s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = t.data();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

// A number or a product/quotient of numbers, e.g. "15/130" or "2*7.5".
std::optional<double> parse_number(std::string_view s) {
    double acc = 1.0;
    char op = '*';
    std::size_t pos = 0;
    bool any = false;
    while (pos <= s.size()) {
        std::size_t next = s.find_first_of("*/", pos);
        // an exponent sign never follows '*' or '/', so splitting here is safe
        const std::string_view token = s.substr(pos, next == std::string_view::npos ? s.npos : next - pos);
        const auto v = parse_plain(token);
        if (!v) return std::nullopt;
        acc = op == '*' ? acc * *v : acc / *v;
        any = true;
        if (next == std::string_view::npos) break;
        op = s[next];
        pos = next + 1;
    }
    if (!any) return std::nullopt;
    return acc;
}

struct Source {
    const std::string& name;
    const std::map<std::string, std::size_t>& lines;

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        auto it = lines.find(key);
        throw ConfigError(name, it == lines.end() ? 0 : it->second, key, message);
    }
};

const std::vector<std::string>& rate_fields() {
    static const std::vector<std::string> f = {
        "rabi_omega0", "detuning",    "gamma_total",   "gamma_plus", "gamma_minus",  "gamma_p1",     "gamma_m1",
        "gamma_0",     "gamma_dark",  "gamma_s",       "Gamma_0",    "Gamma_p1",     "Gamma_m1",     "rabi_pump",
        "pump_detuning", "gamma_mech", "nuclear_shift", "lambda_coupling", "gamma_op_p1", "gamma_op_m1", "omega_a",
        "omega_e",     "omega_p1",    "omega_m1",      "omega_0",    "omega_s"};
    return f;
}

double* rate_slot(ModelParams& p, const std::string& name) {
    static const std::map<std::string, std::function<double*(ModelParams&)>> slots = {
        {"rabi_omega0", [](ModelParams& q) { return &q.rabi_omega0; }},
        {"detuning", [](ModelParams& q) { return &q.detuning; }},
        {"gamma_total", [](ModelParams& q) { return &q.gamma_total; }},
        {"gamma_plus", [](ModelParams& q) { return &q.gamma_plus; }},
        {"gamma_minus", [](ModelParams& q) { return &q.gamma_minus; }},
        {"gamma_p1", [](ModelParams& q) { return &q.gamma_p1; }},
        {"gamma_m1", [](ModelParams& q) { return &q.gamma_m1; }},
        {"gamma_0", [](ModelParams& q) { return &q.gamma_0; }},
        {"gamma_dark", [](ModelParams& q) { return &q.gamma_dark; }},
        {"gamma_s", [](ModelParams& q) { return &q.gamma_s; }},
        {"Gamma_0", [](ModelParams& q) { return &q.Gamma_0; }},
        {"Gamma_p1", [](ModelParams& q) { return &q.Gamma_p1; }},
        {"Gamma_m1", [](ModelParams& q) { return &q.Gamma_m1; }},
        {"rabi_pump", [](ModelParams& q) { return &q.rabi_pump; }},
        {"pump_detuning", [](ModelParams& q) { return &q.pump_detuning; }},
        {"gamma_mech", [](ModelParams& q) { return &q.gamma_mech; }},
        {"nuclear_shift", [](ModelParams& q) { return &q.nuclear_shift; }},
        {"lambda_coupling", [](ModelParams& q) { return &q.eta; }},
        {"omega_a", [](ModelParams& q) { return &q.level_energies.omega_a; }},
        {"omega_e", [](ModelParams& q) { return &q.level_energies.omega_e; }},
        {"omega_p1", [](ModelParams& q) { return &q.level_energies.omega_p1; }},
        {"omega_m1", [](ModelParams& q) { return &q.level_energies.omega_m1; }},
        {"omega_0", [](ModelParams& q) { return &q.level_energies.omega_0; }},
        {"omega_s", [](ModelParams& q) { return &q.level_energies.omega_s; }},
    };
    auto it = slots.find(name);
    return it == slots.end() ? nullptr : it->second(p);
}

struct Suffix {
    std::string_view text;
    double factor;  // to rad/s or kelvin
};

constexpr Suffix frequency_suffixes[] = {
    {"_mhz", constants::two_pi * 1e6}, {"_khz", constants::two_pi * 1e3}, {"_hz", constants::two_pi}};

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

const std::set<std::string>& list_keys() {
    static const std::set<std::string> k = {"nuclear.delta_max_mhz", "nuclear.samples",  "robustness.m_r",
                                            "robustness.gamma_mech_hz", "cooling.omega_m_mhz", "recycling.offsets"};
    return k;
}

std::map<std::string, std::vector<std::string>> allowed_axes() {
    return {{"absorption", {"omega"}},
            {"rates-vs-mr", {"m_r"}},
            {"steady-map", {"quality_q", "temperature_mk"}},
            {"cooling-rate-compare", {"m_r"}},
            {"robustness", {"rabi_deviation"}},
            {"recycling-check", {}},
            {"nuclear-bath", {}}};
}

std::string list_section(const std::string& scenario) {
    if (scenario == "nuclear-bath") return "nuclear";
    if (scenario == "robustness") return "robustness";
    if (scenario == "cooling-rate-compare") return "cooling";
    if (scenario == "recycling-check") return "recycling";
    return {};
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"absorption", "rates-vs-mr", "steady-map", "cooling-rate-compare",
                                                   "robustness", "recycling-check", "nuclear-bath"};
    return names;
}

std::string scenario_summary(std::string_view name) {
    if (name == "absorption") return "weak-probe absorption spectrum with the EIT dip, plus the fluctuation spectrum";
    if (name == "rates-vs-mr") return "heating/cooling coefficients and net rate against m_R at optimum detuning";
    if (name == "steady-map") return "log10 steady phonon number over quality factor and bath temperature";
    if (name == "cooling-rate-compare") return "fitted master-equation cooling rate against the closed form";
    if (name == "robustness") return "steady phonon number against fractional Rabi deviation";
    if (name == "recycling-check") return "three-, four- and seven-level cooling curves with the pump loop";
    if (name == "nuclear-bath") return "ensemble cooling under quasi-static random two-photon detuning";
    return {};
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        v[i] = scale == SweepScale::log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                                        : start + f * (stop - start);
    }
    if (points >= 2) {
        v.front() = start;
        v.back() = stop;
    }
    return v;
}

const SweepAxis* ScenarioConfig::sweep(std::string_view name) const {
    for (const auto& a : sweeps)
        if (a.name == name) return &a;
    return nullptr;
}

std::optional<std::vector<double>> ScenarioConfig::list(std::string_view key) const {
    auto it = lists.find(std::string(key));
    if (it == lists.end()) return std::nullopt;
    return it->second;
}

ScenarioConfig parse_config(std::istream& in, std::string source) {
    ScenarioConfig cfg;
    cfg.source = source;
    std::map<std::string, std::string> raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(source, lineno, "", "expected 'key = value'");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) throw ConfigError(source, lineno, "", "empty key");
        if (value.empty()) throw ConfigError(source, lineno, key, "empty value");
        if (raw.count(key)) throw ConfigError(source, lineno, key, "key given twice");
        raw[key] = value;
        cfg.lines[key] = lineno;
        cfg.entries.emplace_back(key, value);
    }
    const Source src{cfg.source, cfg.lines};

    auto number = [&](const std::string& key, const std::string& value) {
        const auto v = parse_number(value);
        if (!v) src.fail(key, "expected a number, got '" + value + "'");
        return *v;
    };
    auto count = [&](const std::string& key, const std::string& value) -> std::size_t {
        const double v = number(key, value);
        if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) src.fail(key, "expected a non-negative integer");
        return static_cast<std::size_t>(v);
    };

    // Parameter values, resolved after all keys are read since units depend on ω_m.
    std::map<std::string, double> bare_rates;   // ω_m units
    std::map<std::string, std::string> rate_key;  // base name -> key used
    std::optional<double> omega_m, temperature, eta, quality, m_r, mass, mfg, bias, x0, g_e;
    std::optional<std::string> bath;
    std::map<std::string, std::map<std::string, std::string>> sweep_fields;

    auto set_once = [&](std::optional<double>& slot, const std::string& key, double v, const std::string& base) {
        if (slot) src.fail(key, "parameter '" + base + "' given more than once");
        slot = v;
    };

    for (const auto& [key, value] : cfg.entries) {
        if (key == "scenario") {
            cfg.scenario = value;
        } else if (key == "seed") {
            cfg.seed = count(key, value);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "threads") {
            const std::size_t n = count(key, value);
            if (n < 1) src.fail(key, "threads must be >= 1");
            cfg.threads = static_cast<unsigned>(n);
        } else if (key.rfind("params.", 0) == 0) {
            const std::string name = key.substr(7);
            if (name == "bath") {
                if (value != "zero" && value != "thermal") src.fail(key, "expected 'zero' or 'thermal'");
                bath = value;
                continue;
            }
            if (name == "omega_m") {
                set_once(omega_m, key, number(key, value), "omega_m");
                continue;
            }
            bool handled = false;
            for (const auto& s : frequency_suffixes) {
                if (!ends_with(name, s.text)) continue;
                const std::string base = name.substr(0, name.size() - s.text.size());
                if (base == "omega_m") {
                    set_once(omega_m, key, number(key, value) * s.factor, "omega_m");
                } else if (std::find(rate_fields().begin(), rate_fields().end(), base) != rate_fields().end()) {
                    if (rate_key.count(base)) src.fail(key, "parameter '" + base + "' given more than once");
                    cfg.si_rates[base] = number(key, value) * s.factor;
                    rate_key[base] = key;
                } else {
                    src.fail(key, "unknown frequency parameter '" + base + "'");
                }
                handled = true;
                break;
            }
            if (handled) continue;
            if (std::find(rate_fields().begin(), rate_fields().end(), name) != rate_fields().end()) {
                if (rate_key.count(name)) src.fail(key, "parameter '" + name + "' given more than once");
                bare_rates[name] = number(key, value);
                rate_key[name] = key;
            } else if (name == "temperature") {
                set_once(temperature, key, number(key, value), "temperature");
            } else if (name == "temperature_mk") {
                set_once(temperature, key, number(key, value) * 1e-3, "temperature");
            } else if (name == "eta") {
                set_once(eta, key, number(key, value), "eta");
            } else if (name == "quality_q") {
                set_once(quality, key, number(key, value), "quality_q");
            } else if (name == "m_r") {
                set_once(m_r, key, number(key, value), "m_r");
            } else if (name == "mass_kg") {
                set_once(mass, key, number(key, value), "mass_kg");
            } else if (name == "mfg") {
                set_once(mfg, key, number(key, value), "mfg");
            } else if (name == "bias") {
                set_once(bias, key, number(key, value), "bias");
            } else if (name == "x0") {
                set_once(x0, key, number(key, value), "x0");
            } else if (name == "g_e") {
                set_once(g_e, key, number(key, value), "g_e");
            } else {
                src.fail(key, "unknown parameter '" + name + "'");
            }
        } else if (key.rfind("solver.", 0) == 0) {
            const std::string name = key.substr(7);
            if (name == "rel_tol") cfg.solver.rel_tol = number(key, value);
            else if (name == "abs_tol") cfg.solver.abs_tol = number(key, value);
            else if (name == "fock_dim") cfg.solver.fock_dim = count(key, value);
            else if (name == "t_final") cfg.solver.t_final = number(key, value);
            else if (name == "sample_count") cfg.solver.sample_count = count(key, value);
            else if (name == "positivity_checkpoints") cfg.solver.positivity_checkpoints = count(key, value);
            else if (name == "leakage_threshold") cfg.solver.leakage_threshold = number(key, value);
            else src.fail(key, "unknown solver setting '" + name + "'");
        } else if (key.rfind("initial.", 0) == 0) {
            const std::string name = key.substr(8);
            if (name == "nv") cfg.initial.nv = value;
            else if (name == "fock") cfg.initial.fock = count(key, value);
            else if (name == "thermal_n") cfg.initial.thermal_n = number(key, value);
            else src.fail(key, "unknown initial-state field '" + name + "'");
        } else if (key.rfind("sweep.", 0) == 0) {
            const std::string rest = key.substr(6);
            const auto dot = rest.rfind('.');
            if (dot == std::string::npos || dot == 0) src.fail(key, "expected sweep.<axis>.<field>");
            const std::string axis = rest.substr(0, dot), field = rest.substr(dot + 1);
            if (field != "start" && field != "stop" && field != "points" && field != "scale") {
                src.fail(key, "unknown sweep field '" + field + "' (start, stop, points, scale)");
            }
            sweep_fields[axis][field] = value;
        } else if (list_keys().count(key)) {
            std::vector<double> values;
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) values.push_back(number(key, item));
            if (values.empty()) src.fail(key, "empty list");
            cfg.lists[key] = std::move(values);
        } else {
            src.fail(key, "unknown key");
        }
    }

    if (cfg.scenario.empty()) throw ConfigError(source, 0, "scenario", "missing required key");

    for (const auto& [axis, fields] : sweep_fields) {
        const std::string prefix = "sweep." + axis + ".";
        SweepAxis a;
        a.name = axis;
        for (const char* req : {"start", "stop", "points"}) {
            if (!fields.count(req)) {
                throw ConfigError(source, 0, prefix + req, "missing sweep field");
            }
        }
        a.start = number(prefix + "start", fields.at("start"));
        a.stop = number(prefix + "stop", fields.at("stop"));
        a.points = count(prefix + "points", fields.at("points"));
        if (fields.count("scale")) {
            const std::string& s = fields.at("scale");
            if (s == "lin") a.scale = SweepScale::lin;
            else if (s == "log") a.scale = SweepScale::log;
            else src.fail(prefix + "scale", "expected 'lin' or 'log'");
        }
        cfg.sweeps.push_back(a);
    }

    // Resolve the model parameters.
    ModelParams& p = cfg.params;
    if (omega_m) p.omega_m = *omega_m;
    if (!(p.omega_m > 0.0)) src.fail("params.omega_m", "must be > 0");
    for (const auto& [base, v] : bare_rates) {
        if (base == "lambda_coupling" && eta) src.fail(rate_key[base], "give either eta or lambda_coupling");
        if (base == "gamma_op_p1") p.gamma_op_p1 = v;
        else if (base == "gamma_op_m1") p.gamma_op_m1 = v;
        else *rate_slot(p, base) = v;
    }
    for (const auto& [base, v] : cfg.si_rates) {
        if (base == "lambda_coupling" && eta) src.fail(rate_key[base], "give either eta or lambda_coupling");
        const double scaled = v / p.omega_m;
        if (base == "gamma_op_p1") p.gamma_op_p1 = scaled;
        else if (base == "gamma_op_m1") p.gamma_op_m1 = scaled;
        else *rate_slot(p, base) = scaled;
    }
    auto given = [&](const char* base) { return rate_key.count(base) > 0; };
    if (m_r) {
        if (!given("rabi_omega0")) p.rabi_omega0 = *m_r;
        if (!given("detuning")) p.detuning = optimum_detuning(*m_r);
    }
    if (given("gamma_total")) {
        if (!given("gamma_plus")) p.gamma_plus = p.gamma_total / 2.0;
        if (!given("gamma_minus")) p.gamma_minus = p.gamma_total / 2.0;
    } else if (given("gamma_plus") || given("gamma_minus")) {
        p.gamma_total = p.gamma_plus + p.gamma_minus;
    }
    if (!given("gamma_p1")) p.gamma_p1 = p.gamma_plus;
    if (!given("gamma_m1")) p.gamma_m1 = p.gamma_minus;
    if (eta) p.eta = *eta;
    if (temperature) p.temperature = *temperature;
    if (bath) p.bath = *bath == "thermal" ? Bath::thermal : Bath::zero;
    if (quality && given("gamma_mech")) src.fail("params.quality_q", "give either quality_q or gamma_mech");
    try {
        if (quality) p.set_quality_q(*quality);
        if (mass || mfg || x0 || bias || g_e) {
            PhysicalParams phys;
            if (mass) phys.mass = *mass;
            if (mfg) phys.mfg = *mfg;
            if (bias) phys.bias = *bias;
            if (g_e) phys.g_e = *g_e;
            phys.x0 = x0;
            if (mfg) {
                if (eta || given("lambda_coupling")) {
                    src.fail("params.mfg", "coupling given both directly and through the field gradient");
                }
                if (!mass && !x0) src.fail("params.mfg", "needs params.mass_kg or params.x0");
                const LambDicke ld =
                    lamb_dicke_from_physical(mass.value_or(1.0), p.omega_m, phys.mfg, phys.g_e, phys.x0);
                p.eta = ld.eta;
            }
            p.physical = phys;
        }
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(source, 0, "params", e.what());
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "", "cannot open config file");
    return parse_config(in, path.string());
}

ModelParams params_at_omega(const ScenarioConfig& cfg, double omega_m) {
    ModelParams p = cfg.params;
    p.omega_m = omega_m;
    for (const auto& [base, v] : cfg.si_rates) {
        const double scaled = v / omega_m;
        if (base == "gamma_op_p1") p.gamma_op_p1 = scaled;
        else if (base == "gamma_op_m1") p.gamma_op_m1 = scaled;
        else *rate_slot(p, base) = scaled;
    }
    if (cfg.si_rates.count("gamma_total")) {
        if (!cfg.lines.count("params.gamma_plus") && !cfg.si_rates.count("gamma_plus")) p.gamma_plus = p.gamma_total / 2.0;
        if (!cfg.lines.count("params.gamma_minus") && !cfg.si_rates.count("gamma_minus")) p.gamma_minus = p.gamma_total / 2.0;
        if (!cfg.lines.count("params.gamma_p1") && !cfg.si_rates.count("gamma_p1")) p.gamma_p1 = p.gamma_plus;
        if (!cfg.lines.count("params.gamma_m1") && !cfg.si_rates.count("gamma_m1")) p.gamma_m1 = p.gamma_minus;
    }
    if (p.physical && p.physical->mfg > 0.0) {
        p.eta = lamb_dicke_from_physical(p.physical->mass > 0 ? p.physical->mass : 1.0, omega_m, p.physical->mfg,
                                         p.physical->g_e, p.physical->x0)
                    .eta;
    }
    return p;
}

Diagnostics validate(const ScenarioConfig& cfg) {
    Diagnostics diag;
    const Source src{cfg.source, cfg.lines};
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), cfg.scenario) == names.end()) {
        src.fail("scenario", "unknown scenario '" + cfg.scenario + "'");
    }
    const auto axes = allowed_axes().at(cfg.scenario);
    for (const auto& a : cfg.sweeps) {
        const std::string key = "sweep." + a.name + ".points";
        if (std::find(axes.begin(), axes.end(), a.name) == axes.end()) {
            src.fail("sweep." + a.name + ".start",
                     "axis '" + a.name + "' is not a parameter swept by scenario '" + cfg.scenario + "'");
        }
        if (a.points < 2) src.fail(key, "a sweep needs at least 2 points");
        if (!(a.stop > a.start)) src.fail("sweep." + a.name + ".stop", "stop must exceed start");
        if (a.scale == SweepScale::log && !(a.start > 0.0)) {
            src.fail("sweep." + a.name + ".scale", "log sweeps need positive bounds");
        }
    }
    const auto& s = cfg.solver;
    for (const auto& [key, v] : {std::pair<const char*, double>{"solver.rel_tol", s.rel_tol}, {"solver.abs_tol", s.abs_tol}}) {
        if (!(v > 0.0 && v <= 1e-2)) src.fail(key, "tolerance must lie in (0, 1e-2]");
    }
    if (s.sample_count < 2) src.fail("solver.sample_count", "need at least 2 samples");
    if (!(s.leakage_threshold > 0.0 && s.leakage_threshold <= 1.0)) {
        src.fail("solver.leakage_threshold", "must lie in (0, 1]");
    }
    if (s.t_final && !(*s.t_final > 0.0)) src.fail("solver.t_final", "must be > 0");
    if (s.fock_dim) {
        const auto labels = cfg.scenario == "recycling-check" ? seven_level_labels() : three_level_labels();
        try {
            compose_space(labels, *s.fock_dim);
        } catch (const DomainError& e) {
            src.fail("solver.fock_dim", e.what());
        }
    }
    if (cfg.initial.fock && cfg.initial.thermal_n) {
        src.fail("initial.fock", "give either initial.fock or initial.thermal_n");
    }
    const std::string nv = cfg.initial.nv;
    const auto labels = seven_level_labels();
    if (nv != "dark" && nv != "bright" && std::find(labels.begin(), labels.end(), nv) == labels.end()) {
        src.fail("initial.nv", "unknown internal state '" + nv + "'");
    }
    if (s.fock_dim && cfg.initial.fock && *cfg.initial.fock >= *s.fock_dim) {
        src.fail("initial.fock", "initial Fock level outside the truncation");
    }
    const std::string section = list_section(cfg.scenario);
    for (const auto& [key, values] : cfg.lists) {
        if (key.rfind(section + ".", 0) != 0 || section.empty()) {
            diag.warnings.push_back(cfg.source + ": " + key + ": ignored by scenario '" + cfg.scenario + "'");
        }
    }
    if (auto v = cfg.list("nuclear.samples"); v && (v->size() != 1 || (*v)[0] < 1)) {
        src.fail("nuclear.samples", "expected one positive integer");
    }
    if (auto v = cfg.list("nuclear.delta_max_mhz")) {
        for (double d : *v)
            if (!(d >= 0.0)) src.fail("nuclear.delta_max_mhz", "values must be >= 0");
    }
    if (auto v = cfg.list("cooling.omega_m_mhz")) {
        for (double d : *v)
            if (!(d > 0.0)) src.fail("cooling.omega_m_mhz", "values must be > 0");
    }
    if (cfg.scenario == "recycling-check" || cfg.params.rabi_pump != 0.0) {
        const PumpSystem pump = PumpSystem::from(cfg.params);
        try {
            effective_pump_rates(pump);
        } catch (const DomainError& e) {
            src.fail("params.rabi_pump", e.what());
        }
        if (auto w = perturbative_warning(pump)) diag.warnings.push_back(cfg.source + ": params.rabi_pump: " + *w);
    }
    if (cfg.scenario != "absorption" && cfg.scenario != "rates-vs-mr" && cfg.scenario != "robustness" &&
        cfg.scenario != "steady-map" && cfg.params.eta == 0.0) {
        diag.warnings.push_back(cfg.source + ": params.eta: zero coupling, the phonon mode decouples");
    }
    return diag;
}

Diagnostics validate_file(const std::filesystem::path& path) { return validate(load_config(path)); }

}  // namespace eitcool
