#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "circtherm/map_zoo.hpp"
#include "circtherm/transfer_op.hpp"

namespace circtherm {

/// Family name plus the parameters that family accepts.
struct MapSpec {
    std::string family;
    int d = 2;
    double eps = 0.0;
    double alpha = 0.0;
    std::vector<double> slopes;
};

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
};

/// Fully validated run description. Defaults apply to fields the command
/// does not need.
struct RunConfig {
    MapSpec map;
    std::string command;
    Scheme scheme = Scheme::ulam;
    int n = 512;
    double tol = 1e-3;
    std::optional<double> t;
    std::optional<GridSpec> grid;
    double alpha = 1.0;
    int max_period = 8;
    double s = 0.0;
    double delta = 1e-3;
    int n_corr = 64;
    int period = 1;
    int k = 6;
    std::filesystem::path out = ".";
};

/// Command-line overrides applied on top of the document before validation.
struct Overrides {
    std::optional<std::filesystem::path> out;
    std::optional<std::string> scheme;
    std::optional<int> n;
    std::optional<double> tol;
};

inline const std::vector<std::string> kCommands = {"validate", "pressure", "curve",    "t0",      "classify", "spectrum",
                                                   "equilibrium", "lyapunov", "variance", "gapcheck", "oracle"};

/// Parses a JSON document. Unknown keys, missing required fields and values
/// outside an operation's preconditions raise ConfigError; malformed text
/// reports line and column.
RunConfig parse_config(const std::string& text, const Overrides& overrides = {});

CircleMap build_map(const MapSpec& spec);

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3 };

/// Runs the configured command, writing `<command>.json` (and a CSV where the
/// command has tabular output) into `config.out`. The JSON summary is echoed
/// to `out`; failures are reported on `err` with the failing operation named.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + run, mapping configuration errors to exit status 2.
int run_document(const std::string& text, const Overrides& overrides, std::ostream& out, std::ostream& err);

}  // namespace circtherm
