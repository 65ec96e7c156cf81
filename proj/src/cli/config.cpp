#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "qhsim/cli.hpp"

namespace qhsim::cli {

using nlohmann::json;

namespace {

enum class KeyType { Number, Count, Text, NumberList, Matrix };

struct KeySpec {
    KeyType type;
    std::function<void(RunConfig&, const json&)> set;
};

[[noreturn]] void bad_value(const std::string& key, const std::string& why) {
    throw UsageError("invalid value for '" + key + "': " + why);
}

double as_number(const std::string& key, const json& v) {
    if (!v.is_number()) bad_value(key, "expected a number, got " + v.dump());
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad_value(key, "must be finite");
    return x;
}

std::size_t as_count(const std::string& key, const json& v) {
    if (!v.is_number_integer() || v.get<long long>() < 1) bad_value(key, "expected a positive integer, got " + v.dump());
    return v.get<std::size_t>();
}

std::string as_text(const std::string& key, const json& v) {
    if (!v.is_string()) bad_value(key, "expected a string, got " + v.dump());
    return v.get<std::string>();
}

std::vector<double> as_list(const std::string& key, const json& v) {
    if (!v.is_array()) bad_value(key, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(as_number(key, x));
    return out;
}

const std::map<std::string, KeySpec>& key_table() {
    static const std::map<std::string, KeySpec> table = [] {
        std::map<std::string, KeySpec> t;
        auto number = [&t](const std::string& key, double RunConfig::*field) {
            t[key] = {KeyType::Number, [key, field](RunConfig& c, const json& v) { c.*field = as_number(key, v); }};
        };
        number("c", &RunConfig::c);
        number("t", &RunConfig::t);
        number("dt", &RunConfig::dt);
        number("window_start", &RunConfig::window_start);
        number("window_end", &RunConfig::window_end);
        number("u0", &RunConfig::u0);
        number("xi0", &RunConfig::xi0);
        number("boundary_tol", &RunConfig::boundary_tol);
        number("fd_step", &RunConfig::fd_step);

        auto axis = [&t](const std::string& prefix, GridAxis GridSpec::*which) {
            t[prefix + "_min"] = {KeyType::Number, [k = prefix + "_min", which](RunConfig& c, const json& v) {
                                      (c.grid.*which).min = as_number(k, v);
                                  }};
            t[prefix + "_max"] = {KeyType::Number, [k = prefix + "_max", which](RunConfig& c, const json& v) {
                                      (c.grid.*which).max = as_number(k, v);
                                  }};
            t[prefix + "_count"] = {KeyType::Count, [k = prefix + "_count", which](RunConfig& c, const json& v) {
                                        (c.grid.*which).count = as_count(k, v);
                                    }};
        };
        axis("c", &GridSpec::c);
        axis("t", &GridSpec::t);

        t["psi0"] = {KeyType::NumberList, [](RunConfig& c, const json& v) {
                         auto list = as_list("psi0", v);
                         if (list.size() != 4) bad_value("psi0", "expected 4 numbers (re0, im0, re1, im1)");
                         c.psi0 = std::move(list);
                     }};
        t["gammas"] = {KeyType::NumberList, [](RunConfig& c, const json& v) {
                           auto list = as_list("gammas", v);
                           if (list.empty()) bad_value("gammas", "expected at least one value");
                           c.gammas = std::move(list);
                       }};
        t["theta0"] = {KeyType::Matrix, [](RunConfig& c, const json& v) {
                           if (v.is_null()) {
                               c.theta0.reset();
                               return;
                           }
                           if (!v.is_array() || v.size() != 2) bad_value("theta0", "expected a 2x2 matrix");
                           std::vector<std::vector<double>> m;
                           for (const auto& row : v) {
                               auto r = as_list("theta0", row);
                               if (r.size() != 2) bad_value("theta0", "expected a 2x2 matrix");
                               m.push_back(std::move(r));
                           }
                           c.theta0 = std::move(m);
                       }};
        t["scheme"] = {KeyType::Text, [](RunConfig& c, const json& v) {
                           const auto s = scheme_from_name(as_text("scheme", v));
                           if (!s) bad_value("scheme", "expected hermitian-sqrt or cholesky");
                           c.scheme = *s;
                       }};
        t["xi_mode"] = {KeyType::Text, [](RunConfig& c, const json& v) {
                            const auto s = as_text("xi_mode", v);
                            if (s == "minimal-profile") c.xi_mode = XiMode::MinimalProfile;
                            else if (s == "constant") c.xi_mode = XiMode::Constant;
                            else bad_value("xi_mode", "expected minimal-profile or constant");
                        }};
        t["format"] = {KeyType::Text, [](RunConfig& c, const json& v) {
                           const auto s = as_text("format", v);
                           if (s == "csv") c.format = Format::Csv;
                           else if (s == "json") c.format = Format::Json;
                           else bad_value("format", "expected csv or json");
                       }};
        t["family"] = {KeyType::Text, [](RunConfig& c, const json& v) { c.family = as_text("family", v); }};
        t["output"] = {KeyType::Text, [](RunConfig& c, const json& v) { c.output = as_text("output", v); }};
        return t;
    }();
    return table;
}

std::string flag_name(const std::string& key) {
    std::string flag = "--" + key;
    for (char& ch : flag)
        if (ch == '_') ch = '-';
    return flag;
}

// Flag text to the JSON value a config file would hold for the same key.
json flag_value(const std::string& key, KeyType type, const std::string& text) {
    auto number = [&](const std::string& s) -> json {
        const char* begin = s.c_str();
        char* end = nullptr;
        const double x = std::strtod(begin, &end);
        if (s.empty() || end != begin + s.size()) bad_value(key, "'" + text + "' is not a number");
        return x;
    };
    switch (type) {
        case KeyType::Number: return number(text);
        case KeyType::Count: {
            const char* begin = text.c_str();
            char* end = nullptr;
            const long long n = std::strtoll(begin, &end, 10);
            if (text.empty() || end != begin + text.size()) bad_value(key, "'" + text + "' is not an integer");
            return n;
        }
        case KeyType::Text: return text;
        case KeyType::NumberList: {
            std::string body = text;
            const auto first = body.find_first_not_of(" \t");
            if (first != std::string::npos && body[first] == '[') {
                const auto last = body.find_last_not_of(" \t");
                if (body[last] != ']') bad_value(key, "'" + text + "' is not a list");
                body = body.substr(first + 1, last - first - 1);
            }
            json list = json::array();
            std::stringstream ss(body);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto a = item.find_first_not_of(" \t");
                const auto b = item.find_last_not_of(" \t");
                list.push_back(number(a == std::string::npos ? std::string() : item.substr(a, b - a + 1)));
            }
            return list;
        }
        case KeyType::Matrix: {
            json parsed = json::parse(text, nullptr, false);
            if (parsed.is_discarded()) bad_value(key, "'" + text + "' is not a JSON matrix");
            return parsed;
        }
    }
    return nullptr;
}

void validate(const RunConfig& c) {
    auto require = [](bool ok, const std::string& key, const std::string& why) {
        if (!ok) bad_value(key, why);
    };
    require(c.grid.c.count >= 2, "c_count", "must be at least 2");
    require(c.grid.t.count >= 2, "t_count", "must be at least 2");
    require(c.grid.c.min < c.grid.c.max, "c_min", "must be below c_max");
    require(c.grid.t.min < c.grid.t.max, "t_min", "must be below t_max");
    require(c.dt > 0.0, "dt", "must be positive");
    require(c.window_start < c.window_end, "window_start", "must be below window_end");
    require(c.u0 > 0.0, "u0", "must be positive");
    require(c.xi0 >= 0.0 && c.xi0 < std::acos(0.0), "xi0", "must lie in [0, pi/2)");
    require(c.boundary_tol >= 0.0, "boundary_tol", "must be non-negative");
    for (std::size_t i = 1; i < c.gammas.size(); ++i)
        require(c.gammas[i] < c.gammas[i - 1], "gammas", "must be strictly decreasing");
    for (double g : c.gammas) require(g >= 0.0, "gammas", "must be non-negative");
    if (c.format == Format::Csv)
        require(c.subcommand != Subcommand::Metric && c.subcommand != Subcommand::Perturb, "format",
                "metric and perturb produce matrix-valued output and support json only");
}

const std::map<std::string, Subcommand>& subcommands() {
    static const std::map<std::string, Subcommand> names{
        {"phase-diagram", Subcommand::PhaseDiagram}, {"spectrum", Subcommand::Spectrum},
        {"evolve", Subcommand::Evolve},              {"metric", Subcommand::Metric},
        {"perturb", Subcommand::Perturb},
    };
    return names;
}

const std::map<std::string, std::string>& help_text() {
    static const std::map<std::string, std::string> text{
        {"phase-diagram", "Region tag and energies on a (c, t) grid"},
        {"spectrum", "Energies along t at fixed c"},
        {"evolve", "State, metric and Theta-norm through the interface crossing"},
        {"metric", "Metric, Dyson map and Hermitian image at one (c, t) point"},
        {"perturb", "First-order metric correction for a Taylor family"},
        {"c", "Coupling c"},
        {"t", "Time t for the metric subcommand"},
        {"c_min", "Grid: lowest c"},
        {"c_max", "Grid: highest c"},
        {"c_count", "Grid: number of c nodes"},
        {"t_min", "Grid: earliest t"},
        {"t_max", "Grid: latest t"},
        {"t_count", "Grid: number of t nodes"},
        {"dt", "Integrator step"},
        {"window_start", "Evolution start time"},
        {"window_end", "Evolution end time"},
        {"psi0", "Initial state re0,im0,re1,im1"},
        {"scheme", "Dyson factorization: hermitian-sqrt or cholesky"},
        {"u0", "Metric scale u"},
        {"xi_mode", "minimal-profile (sin xi = gamma) or constant"},
        {"xi0", "Angle xi for xi_mode=constant"},
        {"theta0", "Metric at the interface as a 2x2 JSON matrix"},
        {"family", "'benchmark' or a JSON file with h0 and h1"},
        {"gammas", "Coupling values for the residual scan, comma-separated"},
        {"output", "Output path, '-' for stdout"},
        {"format", "csv or json"},
        {"boundary_tol", "Half-width of the boundary bands in c"},
        {"fd_step", "Finite-difference step for d(Omega)/dt, <= 0 for automatic"},
    };
    return text;
}

std::string subcommand_name(Subcommand s) {
    for (const auto& [name, value] : subcommands())
        if (value == s) return name;
    return "?";
}

}  // namespace

Format RunConfig::effective_format() const {
    if (format) return *format;
    return (subcommand == Subcommand::Metric || subcommand == Subcommand::Perturb) ? Format::Json : Format::Csv;
}

void apply_json(RunConfig& config, const json& object) {
    if (!object.is_object()) throw UsageError("config file must hold a flat JSON object");
    const auto& table = key_table();
    for (const auto& [key, value] : object.items()) {
        auto it = table.find(key);
        if (it == table.end()) throw UsageError("unknown config key '" + key + "'");
        it->second.set(config, value);
    }
}

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"Quasi-Hermitian benchmark toolkit: spectra, metrics and evolution across the interface", "qhsim"};
    app.require_subcommand(1, 1);

    std::string config_path;
    app.add_option("--config", config_path, "Flat JSON config file; flags override its values");

    const auto& table = key_table();
    std::map<std::string, std::string> raw;
    std::map<std::string, CLI::Option*> options;
    for (const auto& [key, spec] : table) options[key] = app.add_option(flag_name(key), raw[key], help_text().at(key));

    for (const auto& [name, value] : subcommands()) app.add_subcommand(name, help_text().at(name))->fallthrough();

    // CLI11 wants argv order reversed for the vector overload.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    RunConfig config;
    for (const auto& [name, value] : subcommands())
        if (app.got_subcommand(name)) config.subcommand = value;

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw UsageError("cannot read config file '" + config_path + "'");
        json object = json::parse(in, nullptr, false);
        if (object.is_discarded()) throw UsageError("config file '" + config_path + "' is not valid JSON");
        apply_json(config, object);
    }
    for (const auto& [key, option] : options) {
        if (option->count() == 0) continue;
        const json value = flag_value(key, table.at(key).type, raw[key]);
        table.at(key).set(config, value);
    }
    validate(config);
    return config;
}

json config_to_json(const RunConfig& c) {
    json j;
    j["subcommand"] = subcommand_name(c.subcommand);
    j["c"] = c.c;
    j["t"] = c.t;
    j["c_min"] = c.grid.c.min;
    j["c_max"] = c.grid.c.max;
    j["c_count"] = c.grid.c.count;
    j["t_min"] = c.grid.t.min;
    j["t_max"] = c.grid.t.max;
    j["t_count"] = c.grid.t.count;
    j["dt"] = c.dt;
    j["window_start"] = c.window_start;
    j["window_end"] = c.window_end;
    j["psi0"] = c.psi0;
    j["scheme"] = std::string(scheme_name(c.scheme));
    j["u0"] = c.u0;
    j["xi_mode"] = c.xi_mode == XiMode::Constant ? "constant" : "minimal-profile";
    j["xi0"] = c.xi0;
    j["theta0"] = c.theta0 ? json(*c.theta0) : json(nullptr);
    j["family"] = c.family;
    j["gammas"] = c.gammas;
    j["output"] = c.output;
    j["format"] = c.effective_format() == Format::Json ? "json" : "csv";
    j["boundary_tol"] = c.boundary_tol;
    j["fd_step"] = c.fd_step;
    return j;
}

std::string format_number(double x) {
    if (x == 0.0) return "0";
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string canonical_dump(const json& v) {
    switch (v.type()) {
        case json::value_t::object: {
            std::string out = "{";
            bool first = true;
            for (const auto& [key, value] : v.items()) {
                if (!first) out += ',';
                first = false;
                out += json(key).dump() + ':' + canonical_dump(value);
            }
            return out + '}';
        }
        case json::value_t::array: {
            std::string out = "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ',';
                out += canonical_dump(v[i]);
            }
            return out + ']';
        }
        case json::value_t::number_float: {
            const double x = v.get<double>();
            return std::isfinite(x) ? format_number(x) : "null";
        }
        default: return v.dump();
    }
}

}  // namespace qhsim::cli
