#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "doa/bench.hpp"

namespace doa::tools {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Overlays the keys present in `j` onto `base`; unknown keys are rejected so
// typos do not silently fall back to defaults. Throws ConfigError.
//
// {
//   "array":      {"elements": 12, "wavelength": 1.0, "radius": 1.0},
//   "sources":    {"azimuth_deg": [...], "elevation_deg": [...], "power": [...]},
//   "snr_db":     [-5, 0, 5, 10],
//   "snapshots":  100,
//   "trials":     1000,
//   "seed":       20250101,
//   "threads":    0,
//   "algorithm":  "denm",
//   "de":         {"population": 256, "F": 0.9, "CR": 0.5, "max_iter": 20,
//                  "neighborhood": 8, "share_radius_deg": 30, "species_radius_deg": 15},
//   "grid":       {"azimuth": [0, 360, 361], "elevation": [0, 90, 91]},
//   "extraction": {"method": "dbscan", "eps_deg": 3, "min_pts": 4, "k": 8},
//   "success_threshold_deg": 2.0
// }
bench::Scenario apply_config(const nlohmann::json& j, bench::Scenario base = {});

bench::Scenario load_config_file(const std::filesystem::path& path, bench::Scenario base = {});

nlohmann::json to_json(const bench::Scenario& s);

}  // namespace doa::tools
