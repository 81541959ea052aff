#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "circtherm/map_zoo.hpp"
#include "circtherm/oracle.hpp"
#include "circtherm/spectral.hpp"
#include "circtherm/thermo.hpp"

namespace circtherm {

using Json = nlohmann::ordered_json;

/// Round-trip decimal ("%.17g"); non-finite values print as "nan"/"inf"/"-inf".
std::string format_real(double value);

/// Non-finite doubles become JSON null.
Json json_real(double value);

Json to_json(const MapDiagnostics& d);
/// {lambda1, lambda2_mod, gap_ratio, nodes, h, nu} plus scheme, n, t, converged.
Json to_json(const SpectralData& sd);
Json to_json(const LeadingSpectrum& s);
Json to_json(const EquilibriumState& eq);
/// Absent optionals and NaN residuals are null. chi_min/chi_max are null when
/// no periodic-orbit search ran (max_period == 0).
Json to_json(const TransitionReport& r);
/// Summary: grid extent, violation counts and per-point failures.
Json to_json(const PressureCurve& c);
Json to_json(const LyapunovExtrema& e);
Json to_json(const VarianceReport& v);
Json to_json(const EssentialBoundReport& e);
Json to_json(const PeriodicOrbitSet& s);

/// Header "t,P,chi,entropy,gap_ratio", one row per grid point.
std::string curve_csv(const PressureCurve& c);
/// Header "x,h,nu,mu,jacobian".
std::string equilibrium_csv(const EquilibriumState& eq, const SpectralData& sd);

/// Writes `text` to `path`, creating parent directories. Throws Error on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace circtherm
