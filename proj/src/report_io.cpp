#include "circtherm/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "circtherm/errors.hpp"

namespace circtherm {

namespace {

Json real_array(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(json_real(x));
    return a;
}

Json optional_real(const std::optional<double>& v) { return v ? json_real(*v) : Json(nullptr); }

}  // namespace

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Json json_real(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

Json to_json(const MapDiagnostics& d) {
    Json j;
    j["min_derivative"] = json_real(d.min_derivative);
    j["is_expanding"] = d.is_expanding;
    j["neutral_points"] = real_array(d.neutral_points);
    j["degree"] = d.degree;
    j["topological_entropy"] = json_real(d.topological_entropy);
    j["reduced_smoothness"] = d.reduced_smoothness;
    return j;
}

Json to_json(const SpectralData& sd) {
    Json j;
    j["lambda1"] = json_real(sd.lambda1);
    j["lambda2_mod"] = json_real(sd.lambda2_mod);
    j["gap_ratio"] = json_real(sd.gap_ratio);
    j["nodes"] = real_array(sd.nodes);
    j["h"] = real_array(sd.h);
    j["nu"] = real_array(sd.nu);
    j["scheme"] = to_string(sd.scheme);
    j["kernel"] = to_string(sd.kernel);
    j["n"] = sd.n;
    j["t"] = json_real(sd.t);
    j["converged"] = sd.converged;
    return j;
}

Json to_json(const LeadingSpectrum& s) {
    Json j;
    Json values = Json::array();
    for (const auto& z : s.values) values.push_back(Json{{"re", json_real(z.real())}, {"im", json_real(z.imag())}, {"abs", json_real(std::abs(z))}});
    j["eigenvalues"] = values;
    j["method"] = s.method;
    j["converged"] = s.converged;
    j["iterations"] = s.iterations;
    return j;
}

Json to_json(const EquilibriumState& eq) {
    Json j;
    j["lambda1"] = json_real(eq.lambda1);
    j["t"] = json_real(eq.t);
    double total = 0.0;
    for (double m : eq.mu) total += m;
    j["mu_total"] = json_real(total);
    double jmin = INFINITY, jmax = -INFINITY;
    for (double v : eq.jacobian) {
        jmin = std::min(jmin, v);
        jmax = std::max(jmax, v);
    }
    j["jacobian_min"] = json_real(jmin);
    j["jacobian_max"] = json_real(jmax);
    return j;
}

Json to_json(const TransitionReport& r) {
    Json j;
    j["t0"] = optional_real(r.t0);
    j["classification"] = to_string(r.classification);
    j["chi_min"] = r.max_period > 0 ? json_real(r.chi_min) : Json(nullptr);
    j["chi_max"] = r.max_period > 0 ? json_real(r.chi_max) : Json(nullptr);
    j["dynamical_dimension"] = optional_real(r.dynamical_dimension);
    j["residual"] = json_real(r.residual);
    j["bowen_root"] = optional_real(r.bowen_root);
    j["expanding"] = r.expanding;
    if (r.expanding)
        j["caveat"] = "map is expanding: no phase transition; bowen_root is the zero of P, not a transition parameter";
    j["zero_threshold"] = json_real(r.zero_threshold);
    j["max_period"] = r.max_period;
    return j;
}

Json to_json(const PressureCurve& c) {
    Json j;
    j["scheme"] = to_string(c.scheme);
    j["n"] = c.n;
    j["points"] = c.size();
    j["t_min"] = c.t_grid.empty() ? Json(nullptr) : json_real(c.t_grid.front());
    j["t_max"] = c.t_grid.empty() ? Json(nullptr) : json_real(c.t_grid.back());
    j["convexity_violations"] = c.convexity_violations();
    j["monotonicity_violations"] = c.monotonicity_violations();
    Json failures = Json::array();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!c.failures[i].empty()) failures.push_back(Json{{"t", json_real(c.t_grid[i])}, {"error", c.failures[i]}});
    j["failures"] = failures;
    return j;
}

Json to_json(const LyapunovExtrema& e) {
    Json j;
    j["chi_min"] = json_real(e.chi_min);
    j["chi_max"] = json_real(e.chi_max);
    j["max_period"] = e.max_period;
    j["orbits_examined"] = e.orbits_examined;
    return j;
}

Json to_json(const VarianceReport& v) {
    Json j;
    j["s"] = json_real(v.s);
    j["sigma2_nagaev"] = json_real(v.sigma2_nagaev);
    j["sigma2_green_kubo"] = json_real(v.sigma2_green_kubo);
    j["agreement"] = json_real(v.agreement);
    return j;
}

Json to_json(const EssentialBoundReport& e) {
    Json j;
    j["t"] = json_real(e.t);
    j["alpha"] = json_real(e.alpha);
    j["observed_ratio"] = json_real(e.observed_ratio);
    j["bound"] = json_real(e.bound);
    j["within"] = e.within;
    return j;
}

Json to_json(const PeriodicOrbitSet& s) {
    Json j;
    j["period"] = s.period;
    j["count"] = s.count;
    Json orbits = Json::array();
    for (const auto& o : s.orbits)
        orbits.push_back(Json{{"point", json_real(o.point)}, {"log_multiplier", json_real(o.log_multiplier)}});
    j["orbits"] = orbits;
    return j;
}

std::string curve_csv(const PressureCurve& c) {
    std::ostringstream os;
    os << "t,P,chi,entropy,gap_ratio\n";
    for (std::size_t i = 0; i < c.size(); ++i)
        os << format_real(c.t_grid[i]) << ',' << format_real(c.P[i]) << ',' << format_real(c.chi[i]) << ','
           << format_real(c.entropy[i]) << ',' << format_real(c.gap_ratio[i]) << '\n';
    return os.str();
}

std::string equilibrium_csv(const EquilibriumState& eq, const SpectralData& sd) {
    std::ostringstream os;
    os << "x,h,nu,mu,jacobian\n";
    for (std::size_t i = 0; i < eq.mu.size(); ++i)
        os << format_real(eq.nodes[i]) << ',' << format_real(sd.h[i]) << ',' << format_real(sd.nu[i]) << ','
           << format_real(eq.mu[i]) << ',' << format_real(eq.jacobian[i]) << '\n';
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("write", "cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw Error("write", "failed writing " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace circtherm
