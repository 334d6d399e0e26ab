#pragma once

#include "fqcsim/analysis.hpp"
#include "fqcsim/evolve.hpp"
#include "fqcsim/metrics.hpp"
#include "fqcsim/sweep.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fqcsim {

using Json = nlohmann::ordered_json;

/// Full-precision scientific notation, 17 significant digits.
std::string format_double(double x);

/// Columns: t, pi_e, re/im of every rho entry, then |c_k|^2 when recorded.
/// Every CSV starts with a "# config: <json>" line carrying the provenance.
std::string timeseries_csv(const TimeSeries& series, const Json& provenance);
Json to_json(const TimeSeries& series);

Json to_json(const MetricResult& m);
Json to_json(const FitReport& r);

/// Columns: k, energy, occupation.
std::string spectrum_csv(const SidebandSpectrum& s, const Json& provenance);
Json to_json(const SidebandSpectrum& s);

/// Columns: t, sigma.
std::string sigma_csv(const NonMarkovianity& nm, const Json& provenance);
Json to_json(const NonMarkovianity& nm);

/// Long format: N, v, value, ok.
std::string sweep_csv(const SweepMap& map, const Json& provenance);
Json to_json(const SweepMap& map);

/// Columns: size, variant, levels, Omega_tilde, Gamma_tilde, d2, converged.
std::string size_scan_csv(const std::vector<SizeScanPoint>& points, const Json& provenance);
Json to_json(const std::vector<SizeScanPoint>& points);

/// Writes `content` to `path`, creating parent directories; throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace fqcsim
