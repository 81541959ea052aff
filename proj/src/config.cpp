#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

#include "circtherm/cli.hpp"
#include "circtherm/errors.hpp"
#include "circtherm/oracle.hpp"

namespace circtherm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ConfigError(field, what); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(where + it.key(), "unknown key");
}

double real_field(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(where + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where + key, "must be finite");
    return x;
}

int int_field(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (v.is_number_integer()) {
        const auto i = v.get<long long>();
        if (i < -1'000'000'000LL || i > 1'000'000'000LL) fail(where + key, "integer out of range");
        return static_cast<int>(i);
    }
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) <= 1e9) return static_cast<int>(x);
    }
    fail(where + key, "expected an integer");
}

std::string string_field(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_string()) fail(where + key, "expected a string");
    return v.get<std::string>();
}

void require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) fail(where + key, "required field is missing");
}

MapSpec parse_map(const json& m) {
    if (!m.is_object()) fail("map", "expected an object");
    require(m, "family", "map.");
    MapSpec spec;
    spec.family = string_field(m, "family", "map.");
    const std::string w = "map.";
    if (spec.family == "d_adic") {
        reject_unknown(m, {"family", "d"}, w);
        require(m, "d", w);
        spec.d = int_field(m, "d", w);
    } else if (spec.family == "perturbed_expanding") {
        reject_unknown(m, {"family", "d", "eps"}, w);
        require(m, "d", w);
        require(m, "eps", w);
        spec.d = int_field(m, "d", w);
        spec.eps = real_field(m, "eps", w);
    } else if (spec.family == "neutral_doubling") {
        reject_unknown(m, {"family"}, w);
    } else if (spec.family == "piecewise_linear") {
        reject_unknown(m, {"family", "slopes"}, w);
        require(m, "slopes", w);
        const auto& s = m.at("slopes");
        if (!s.is_array()) fail("map.slopes", "expected an array of numbers");
        for (const auto& v : s) {
            if (!v.is_number()) fail("map.slopes", "expected an array of numbers");
            spec.slopes.push_back(v.get<double>());
        }
    } else if (spec.family == "manneville_pomeau_circle") {
        reject_unknown(m, {"family", "alpha"}, w);
        require(m, "alpha", w);
        spec.alpha = real_field(m, "alpha", w);
    } else {
        fail("map.family", "unknown family '" + spec.family +
                               "' (expected d_adic, perturbed_expanding, neutral_doubling, piecewise_linear or "
                               "manneville_pomeau_circle)");
    }
    return spec;
}

std::string position_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << column;
    return os.str();
}

bool needs_t(const std::string& c) {
    return c == "pressure" || c == "spectrum" || c == "equilibrium" || c == "gapcheck" || c == "oracle";
}

}  // namespace

CircleMap build_map(const MapSpec& spec) {
    if (spec.family == "d_adic") return CircleMap::d_adic(spec.d);
    if (spec.family == "perturbed_expanding") return CircleMap::perturbed_expanding(spec.d, spec.eps);
    if (spec.family == "neutral_doubling") return CircleMap::neutral_doubling();
    if (spec.family == "piecewise_linear") return CircleMap::piecewise_linear(spec.slopes);
    if (spec.family == "manneville_pomeau_circle") return CircleMap::manneville_pomeau_circle(spec.alpha);
    throw ConfigError("map.family", "unknown family '" + spec.family + "'");
}

RunConfig parse_config(const std::string& text, const Overrides& overrides) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        const auto pos = what.find("] ");
        if (pos != std::string::npos) what = what.substr(pos + 2);
        throw ConfigError("config", "parse error at " + position_of(text, e.byte) + ": " + what);
    }
    if (!doc.is_object()) fail("config", "top level must be an object");
    reject_unknown(doc,
                   {"map", "command", "scheme", "n", "tol", "t", "grid", "alpha", "max_period", "s", "delta",
                    "n_corr", "period", "k", "out"},
                   "");

    RunConfig cfg;
    require(doc, "map", "");
    require(doc, "command", "");
    cfg.map = parse_map(doc.at("map"));
    cfg.command = string_field(doc, "command", "");
    if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
        fail("command", "unknown command '" + cfg.command + "'");

    std::optional<std::string> scheme_text = overrides.scheme;
    if (!scheme_text && doc.contains("scheme")) scheme_text = string_field(doc, "scheme", "");
    if (scheme_text) {
        try {
            cfg.scheme = scheme_from_string(*scheme_text);
        } catch (const Error& e) {
            fail("scheme", "expected 'ulam' or 'collocation', got '" + *scheme_text + "'");
        }
    } else {
        cfg.scheme = cfg.command == "gapcheck" ? Scheme::collocation : Scheme::ulam;
    }

    if (doc.contains("n")) cfg.n = int_field(doc, "n", "");
    if (overrides.n) cfg.n = *overrides.n;
    if (doc.contains("tol")) cfg.tol = real_field(doc, "tol", "");
    if (overrides.tol) cfg.tol = *overrides.tol;
    if (doc.contains("out")) cfg.out = string_field(doc, "out", "");
    if (overrides.out) cfg.out = *overrides.out;
    if (doc.contains("t")) cfg.t = real_field(doc, "t", "");
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        if (!g.is_object()) fail("grid", "expected an object with start, stop, step");
        reject_unknown(g, {"start", "stop", "step"}, "grid.");
        for (const char* key : {"start", "stop", "step"}) require(g, key, "grid.");
        cfg.grid = GridSpec{real_field(g, "start", "grid."), real_field(g, "stop", "grid."),
                            real_field(g, "step", "grid.")};
    }
    if (doc.contains("alpha")) cfg.alpha = real_field(doc, "alpha", "");
    if (doc.contains("max_period")) cfg.max_period = int_field(doc, "max_period", "");
    if (doc.contains("s")) cfg.s = real_field(doc, "s", "");
    if (doc.contains("delta")) cfg.delta = real_field(doc, "delta", "");
    if (doc.contains("n_corr")) cfg.n_corr = int_field(doc, "n_corr", "");
    if (doc.contains("period")) cfg.period = int_field(doc, "period", "");
    if (doc.contains("k")) cfg.k = int_field(doc, "k", "");

    // Preconditions of the dispatched operation.
    CircleMap map = [&] {
        try {
            auto m = build_map(cfg.map);
            validate(m);
            return m;
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError("map", e.what());
        }
    }();
    if (cfg.n < 8) fail("n", "must be at least 8");
    if (cfg.n > 16384) fail("n", "must not exceed 16384");
    if (cfg.scheme == Scheme::collocation && cfg.n % 2 != 0) fail("n", "collocation requires an even n");
    if (!(cfg.tol > 0.0)) fail("tol", "must be positive");
    if (needs_t(cfg.command) && !cfg.t) fail("t", "required by command '" + cfg.command + "'");
    if (cfg.command == "curve") {
        if (!cfg.grid) fail("grid", "required by command 'curve'");
        if (!(cfg.grid->step > 0.0)) fail("grid.step", "must be positive");
        if (!(cfg.grid->stop >= cfg.grid->start)) fail("grid.stop", "must not be below grid.start");
        if ((cfg.grid->stop - cfg.grid->start) / cfg.grid->step > 10000.0) fail("grid", "more than 10001 points");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) fail("alpha", "must lie in (0, 1]");
    const auto check_period = [&](int p, const std::string& field) {
        if (p < 1 || p > kMaxPeriod) fail(field, "must lie in [1, 20]");
        if (itinerary_count(map.degree(), p) > kOrbitBudget)
            fail(field, "degree^" + std::to_string(p) + " exceeds the orbit budget of 1e7");
    };
    if (cfg.command == "lyapunov" || cfg.command == "classify") check_period(cfg.max_period, "max_period");
    if (cfg.command == "oracle") check_period(cfg.period, "period");
    if (!(cfg.delta > 0.0)) fail("delta", "must be positive");
    if (cfg.n_corr < 0) fail("n_corr", "must be non-negative");
    if (cfg.k < 1 || cfg.k > cfg.n) fail("k", "must lie in [1, n]");
    return cfg;
}

}  // namespace circtherm
