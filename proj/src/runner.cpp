#include <cmath>
#include <ostream>

#include "circtherm/cli.hpp"
#include "circtherm/errors.hpp"
#include "circtherm/oracle.hpp"
#include "circtherm/report_io.hpp"
#include "circtherm/spectral.hpp"
#include "circtherm/thermo.hpp"

namespace circtherm {

namespace {

Json map_json(const MapSpec& spec, const CircleMap& map) {
    Json j;
    j["family"] = spec.family;
    j["name"] = map.describe();
    j["degree"] = map.degree();
    if (spec.family == "d_adic" || spec.family == "perturbed_expanding") j["d"] = spec.d;
    if (spec.family == "perturbed_expanding") j["eps"] = spec.eps;
    if (spec.family == "piecewise_linear") j["slopes"] = spec.slopes;
    if (spec.family == "manneville_pomeau_circle") j["alpha"] = spec.alpha;
    return j;
}

// The command body; returns the "result" object and writes any CSV itself.
Json dispatch(const RunConfig& c, const CircleMap& map) {
    const std::string& cmd = c.command;
    if (cmd == "validate") {
        validate(map);
        return to_json(diagnose(map));
    }
    if (cmd == "pressure") {
        Json j;
        j["t"] = *c.t;
        j["P"] = json_real(pressure(map, *c.t, c.scheme, c.n));
        return j;
    }
    if (cmd == "curve") {
        const auto grid = make_grid(c.grid->start, c.grid->stop, c.grid->step);
        const auto curve = pressure_curve(map, grid, c.scheme, c.n);
        write_text(c.out / "curve.csv", curve_csv(curve));
        return to_json(curve);
    }
    if (cmd == "t0") return to_json(find_t0(map, c.scheme, c.n, c.tol));
    if (cmd == "classify") return to_json(classify_transition(map, c.scheme, c.n, c.max_period, c.tol));
    if (cmd == "spectrum") {
        const auto m = assemble(map, *c.t, c.scheme, c.n);
        Json j;
        j["leading"] = to_json(leading_spectrum(m, c.k));
        j["spectral_data"] = to_json(spectral_data(m));
        return j;
    }
    if (cmd == "equilibrium") {
        const auto sd = spectral_data(map, *c.t, c.scheme, c.n);
        const auto eq = equilibrium_state(sd, map);
        write_text(c.out / "equilibrium.csv", equilibrium_csv(eq, sd));
        auto j = to_json(eq);
        double chi = 0.0, h = 0.0;
        for (std::size_t i = 0; i < eq.mu.size(); ++i) {
            chi += eq.mu[i] * std::log(map.derivative(eq.nodes[i]));
            h += eq.mu[i] * std::log(eq.jacobian[i]);
        }
        j["lyapunov"] = json_real(chi);
        j["entropy_rokhlin"] = json_real(h);
        return j;
    }
    if (cmd == "lyapunov") return to_json(lyapunov_extrema(map, c.max_period));
    if (cmd == "variance") return to_json(variance(map, c.s, c.scheme, c.n, c.delta, c.n_corr));
    if (cmd == "gapcheck") return to_json(essential_bound_check(map, *c.t, c.alpha, c.scheme, c.n));
    if (cmd == "oracle") {
        const auto set = enumerate_periodic_orbits(map, c.period);
        Json j;
        j["t"] = *c.t;
        j["period"] = c.period;
        j["orbit_count"] = set.count;
        j["itineraries"] = itinerary_count(map.degree(), c.period);
        j["pressure_periodic_orbits"] = json_real(pressure_periodic_orbits(map, *c.t, c.period));
        if (map.family() == MapFamily::piecewise_linear)
            j["pressure_exact"] = json_real(exact_pressure_piecewise_linear(map.params().slopes, *c.t));
        return j;
    }
    throw ConfigError("command", "unknown command '" + cmd + "'");
}

bool is_validation(const Error& e) {
    return dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
           dynamic_cast<const DimensionError*>(&e) || dynamic_cast<const BudgetError*>(&e);
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const CircleMap map = build_map(config.map);
        Json summary;
        summary["command"] = config.command;
        summary["map"] = map_json(config.map, map);
        summary["scheme"] = to_string(config.scheme);
        summary["n"] = config.n;
        summary["result"] = dispatch(config, map);
        const std::string text = dump(summary);
        write_text(config.out / (config.command + ".json"), text);
        out << text;
        return kExitOk;
    } catch (const Error& e) {
        err << "error: operation '" << e.operation() << "' failed: " << e.what() << '\n';
        return is_validation(e) ? kExitValidation : kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: operation '" << config.command << "' failed: " << e.what() << '\n';
        return kExitNumerical;
    }
}

int run_document(const std::string& text, const Overrides& overrides, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_config(text, overrides);
    } catch (const Error& e) {
        err << "error: invalid configuration (" << e.operation() << "): " << e.what() << '\n';
        return kExitValidation;
    }
    return run(config, out, err);
}

}  // namespace circtherm
