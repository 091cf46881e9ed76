#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doa_tools/scenario_config.hpp"

using namespace doa;
using doa::tools::ConfigError;
using nlohmann::json;

TEST_CASE("config: overlay keeps unspecified defaults") {
    const auto s = tools::apply_config(json::parse(R"({"trials": 7, "de": {"population": 64}, "snr_db": 3})"));
    CHECK(s.trials == 7);
    CHECK(s.de.population_size == 64);
    CHECK(s.de.scale_factor == 0.9);
    CHECK(s.snr_db == std::vector<double>{3.0});
    CHECK(s.num_elements == 12);
    CHECK(s.algorithm == Algorithm::DENM);
}

TEST_CASE("config: full document") {
    const auto s = tools::apply_config(json::parse(R"({
        "array": {"elements": 16, "wavelength": 2.0, "radius": 1.5},
        "sources": {"azimuth_deg": [10, 200], "elevation_deg": [20, 70]},
        "snr_db": [-5, 10],
        "snapshots": 50,
        "seed": 9,
        "algorithm": "sde",
        "grid": {"azimuth": [0, 360, 181], "elevation": [0, 90, 46]},
        "extraction": {"method": "kmeanspp", "eps_deg": 2.5, "min_pts": 3, "k": 6},
        "success_threshold_deg": 1.0
    })"));
    CHECK(s.num_elements == 16);
    CHECK(s.radius == 1.5);
    CHECK(s.num_sources() == 2);
    CHECK(s.master_seed == 9);
    CHECK(s.algorithm == Algorithm::SpeciesDE);
    CHECK(s.grid.azimuth_samples == 181);
    CHECK(s.extraction == ExtractionMethod::KMeansPP);
    CHECK(s.extraction_params.dbscan.eps == 2.5);
    CHECK(s.extraction_params.klocalmax_k == 6);

    const auto back = tools::apply_config(tools::to_json(s));
    CHECK(back.num_elements == 16);
    CHECK(back.sources.azimuths_deg == s.sources.azimuths_deg);
    CHECK(back.extraction == s.extraction);
    CHECK(back.de.crossover_rate == s.de.crossover_rate);
}

TEST_CASE("config: unknown keys and bad values are errors") {
    CHECK_THROWS_AS(tools::apply_config(json::parse(R"({"trails": 3})")), ConfigError);
    CHECK_THROWS_AS(tools::apply_config(json::parse(R"({"de": {"pop": 3}})")), ConfigError);
    CHECK_THROWS_AS(tools::apply_config(json::parse(R"({"algorithm": "pso"})")), ConfigError);
    CHECK_THROWS_AS(tools::apply_config(json::parse(R"({"snapshots": "many"})")), ConfigError);
    CHECK_THROWS_AS(tools::apply_config(json::parse(R"({"de": {"CR": 2}})")), ConfigError);
    CHECK_THROWS_AS(tools::apply_config(json::parse(R"({"grid": {"azimuth": [0, 360]}})")), ConfigError);
}

TEST_CASE("config: file loading accepts comments") {
    const auto path = std::filesystem::temp_directory_path() / "doa_config_test.json";
    {
        std::ofstream f(path);
        f << "// scenario\n{\"trials\": 11 /* inline */}\n";
    }
    CHECK(tools::load_config_file(path).trials == 11);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(tools::load_config_file(path), ConfigError);
}
