#include "doa_tools/scenario_config.hpp"

#include <fstream>
#include <set>

namespace doa::tools {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

bench::Scenario apply_config(const json& j, bench::Scenario s) {
    try {
        reject_unknown(j,
                       {"array", "sources", "snr_db", "snapshots", "trials", "seed", "threads", "algorithm", "de",
                        "grid", "extraction", "success_threshold_deg"},
                       "config");
        if (j.contains("array")) {
            const auto& a = j.at("array");
            reject_unknown(a, {"elements", "wavelength", "radius"}, "array");
            read(a, "elements", s.num_elements);
            read(a, "wavelength", s.wavelength);
            read(a, "radius", s.radius);
        }
        if (j.contains("sources")) {
            const auto& src = j.at("sources");
            reject_unknown(src, {"azimuth_deg", "elevation_deg", "power"}, "sources");
            SourceSet set = SourceSet::from_degrees(src.at("azimuth_deg").get<std::vector<double>>(),
                                                    src.at("elevation_deg").get<std::vector<double>>());
            read(src, "power", set.powers);
            s.sources = std::move(set);
        }
        if (j.contains("snr_db")) {
            const auto& v = j.at("snr_db");
            s.snr_db = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
        }
        read(j, "snapshots", s.snapshots);
        read(j, "trials", s.trials);
        read(j, "seed", s.master_seed);
        read(j, "threads", s.threads);
        read(j, "success_threshold_deg", s.success_threshold_deg);
        if (j.contains("algorithm")) s.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        if (j.contains("de")) {
            const auto& d = j.at("de");
            reject_unknown(d,
                           {"population", "F", "CR", "max_iter", "neighborhood", "share_radius_deg",
                            "species_radius_deg"},
                           "de");
            read(d, "population", s.de.population_size);
            read(d, "F", s.de.scale_factor);
            read(d, "CR", s.de.crossover_rate);
            read(d, "max_iter", s.de.max_iterations);
            read(d, "neighborhood", s.de.neighborhood_size);
            read(d, "share_radius_deg", s.de.share_radius);
            read(d, "species_radius_deg", s.de.species_radius);
        }
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            reject_unknown(g, {"azimuth", "elevation"}, "grid");
            auto axis = [](const json& a, double& lo, double& hi, int& n) {
                if (!a.is_array() || a.size() != 3) throw ConfigError("grid axis must be [lo, hi, samples]");
                lo = a[0].get<double>();
                hi = a[1].get<double>();
                n = a[2].get<int>();
            };
            if (g.contains("azimuth"))
                axis(g.at("azimuth"), s.grid.azimuth_lo, s.grid.azimuth_hi, s.grid.azimuth_samples);
            if (g.contains("elevation"))
                axis(g.at("elevation"), s.grid.elevation_lo, s.grid.elevation_hi, s.grid.elevation_samples);
        }
        if (j.contains("extraction")) {
            const auto& e = j.at("extraction");
            reject_unknown(e, {"method", "eps_deg", "min_pts", "k"}, "extraction");
            if (e.contains("method")) s.extraction = parse_extraction(e.at("method").get<std::string>());
            read(e, "eps_deg", s.extraction_params.dbscan.eps);
            read(e, "min_pts", s.extraction_params.dbscan.min_pts);
            read(e, "k", s.extraction_params.klocalmax_k);
        }
        s.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return s;
}

bench::Scenario load_config_file(const std::filesystem::path& path, bench::Scenario base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return apply_config(j, std::move(base));
}

json to_json(const bench::Scenario& s) {
    return {
        {"array", {{"elements", s.num_elements}, {"wavelength", s.wavelength}, {"radius", s.geometry().radius()}}},
        {"sources",
         {{"azimuth_deg", s.sources.azimuths_deg},
          {"elevation_deg", s.sources.elevations_deg},
          {"power", s.sources.powers}}},
        {"snr_db", s.snr_db},
        {"snapshots", s.snapshots},
        {"trials", s.trials},
        {"seed", s.master_seed},
        {"threads", s.threads},
        {"algorithm", std::string(to_string(s.algorithm))},
        {"de",
         {{"population", s.de.population_size},
          {"F", s.de.scale_factor},
          {"CR", s.de.crossover_rate},
          {"max_iter", s.de.max_iterations},
          {"neighborhood", s.de.neighborhood_size},
          {"share_radius_deg", s.de.share_radius},
          {"species_radius_deg", s.de.species_radius}}},
        {"grid",
         {{"azimuth", {s.grid.azimuth_lo, s.grid.azimuth_hi, s.grid.azimuth_samples}},
          {"elevation", {s.grid.elevation_lo, s.grid.elevation_hi, s.grid.elevation_samples}}}},
        {"extraction",
         {{"method", std::string(to_string(s.extraction))},
          {"eps_deg", s.extraction_params.dbscan.eps},
          {"min_pts", s.extraction_params.dbscan.min_pts},
          {"k", s.extraction_params.klocalmax_k}}},
        {"success_threshold_deg", s.success_threshold_deg},
    };
}

}  // namespace doa::tools
