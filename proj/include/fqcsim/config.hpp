#pragma once

#include "fqcsim/hamiltonian.hpp"
#include "fqcsim/io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fqcsim {

/// Initial system state: a basis label ("e" or "g") or explicit (c_g, c_e).
struct InitialState {
    std::string label = "e";
    std::optional<std::array<cplx, 2>> amplitudes;

    bool operator==(const InitialState&) const = default;
};

struct SidebandSettings {
    bool enabled = false;
    std::string method = "closed";
    double t_final = 8.0;
    int grid_points = 8001;
    bool operator==(const SidebandSettings&) const = default;
};

struct MarkovSettings {
    bool enabled = false;
    int pairs = 256;
    std::string domain = "system";
    int bootstrap = 1000;
    bool operator==(const MarkovSettings&) const = default;
};

struct FitSettings {
    /// Negative means "use Omega0".
    double omega_guess = -1.0;
    double gamma_guess = 1.0;
    bool operator==(const FitSettings&) const = default;
};

struct RevivalSettings {
    double search_start = -1.0;
    double threshold_fraction = 0.5;
    bool operator==(const RevivalSettings&) const = default;
};

struct SweepSettings {
    std::vector<int> n_values;
    std::vector<double> v_values;
    std::string metric = "d1";
    double cell_budget_seconds = 30.0;
    bool size_scan = false;
    std::vector<int> sizes;
    bool adaptive = false;
    bool operator==(const SweepSettings&) const = default;
};

struct CompareSettings {
    int flat_size = 35;
    int adaptive_size = 34;
    bool operator==(const CompareSettings&) const = default;
};

/// Everything a subcommand needs. The output directory is a location, not a
/// parameter, so it is kept out of the provenance block.
struct RunConfig {
    std::string model = "decay";
    int n_half = 15;
    double v = 0.3;
    double gamma = 1.0;
    std::optional<double> hole;
    double omega0 = 0.0;
    double delta = 0.0;
    double t_final = 10.0;
    int grid_points = kDefaultGridPoints;
    InitialState initial;
    std::uint64_t seed = 1;
    std::string out = "out";

    SidebandSettings sidebands;
    MarkovSettings markov;
    FitSettings fit;
    RevivalSettings revival;
    SweepSettings sweep;
    CompareSettings compare;

    bool operator==(const RunConfig&) const = default;

    FqcSpec fqc_spec() const;
    DriveSpec drive_spec() const;
    /// (c_g, c_e) for two-level runs.
    SystemVector initial_system() const;
    void validate() const;
};

/// Built-in defaults for a subcommand (decay, rabi, sweep, sidebands, markov,
/// fit, adaptive-compare). Throws ConfigError for an unknown name.
RunConfig default_config(const std::string& command);

/// Applies a JSON object onto `base`. Unknown keys anywhere are rejected.
RunConfig apply_json(RunConfig base, const Json& j);

/// Provenance form of the config (every field except `out`).
Json to_json(const RunConfig& cfg);

/// Parses "a:b:step" or "x,y,z" into values.
std::vector<double> parse_real_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace fqcsim
