#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "doa/music.hpp"

using namespace doa;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

SourceSet paper_sources() { return SourceSet::from_degrees({30.42, 120.27, 240.51}, {60.39, 29.42, 45.55}); }

NoiseProjector noiseless_projector(const ArrayGeometry& g, const SourceSet& src) {
    const auto x = synthesize_snapshots(g, src, INFINITY, 200, 21);
    return NoiseProjector(g, subspace_split(sample_covariance(x), src.count()));
}

}  // namespace

TEST_CASE("music_value: G = I gives 1/M everywhere") {
    const auto g = ArrayGeometry::uniform_circular(12);
    const NoiseProjector p(g, CMatrix::Identity(12, 12), 0);
    for (double t : {0.0, 0.5, 3.0, 6.0})
        for (double e : {0.0, 0.3, kPi / 2}) CHECK(music_value(p, t, e) == doctest::Approx(1.0 / 12).epsilon(1e-12));
}

TEST_CASE("music_value: projector and basis forms agree") {
    const auto g = ArrayGeometry::uniform_circular(12);
    const auto s = subspace_split(sample_covariance(synthesize_snapshots(g, paper_sources(), 0.0, 100, 4)), 3);
    const NoiseProjector p(g, s);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> th(0.0, 2 * kPi), ph(0.0, kPi / 2);
    for (int k = 0; k < 300; ++k) {
        const double t = th(rng), e = ph(rng);
        const double a = music_value(p, t, e), b = music_value_from_basis(g, s.noise_basis, t, e);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("music_value: 2 pi periodic in azimuth and bounded below by 1/M") {
    const auto g = ArrayGeometry::uniform_circular(12);
    const NoiseProjector p(g, subspace_split(sample_covariance(synthesize_snapshots(g, paper_sources(), 5.0, 100, 6)), 3));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> th(0.0, 2 * kPi), ph(0.0, kPi / 2);
    for (int k = 0; k < 300; ++k) {
        const double t = th(rng), e = ph(rng);
        const double v = music_value(p, t, e);
        CHECK(std::isfinite(v));
        CHECK(v >= 1.0 / 12 - 1e-12);
        CHECK(std::abs(music_value(p, t + 2 * kPi, e) - v) <= 1e-9 * v);
    }
}

TEST_CASE("music_value: noiseless peaks dominate points 10 degrees away") {
    const auto g = ArrayGeometry::uniform_circular(12);
    const auto src = paper_sources();
    const auto p = noiseless_projector(g, src);
    for (int l = 0; l < 3; ++l) {
        const double t0 = src.azimuths_deg[l], e0 = src.elevations_deg[l];
        const double peak = music_value(p, t0 * kDeg, e0 * kDeg);
        CHECK(peak > 1e8);
        for (int k = 0; k < 36; ++k) {
            const double ang = k * 10.0 * kDeg;
            const double t = t0 + 10.0 * std::cos(ang), e = e0 + 10.0 * std::sin(ang);
            if (e < 0 || e > 90) continue;
            CHECK(peak / music_value(p, t * kDeg, e * kDeg) >= 1e3);
        }
    }
}

TEST_CASE("NoiseProjector: rejects non-Hermitian or mis-sized G") {
    const auto g = ArrayGeometry::uniform_circular(4);
    CMatrix bad = CMatrix::Identity(4, 4);
    bad(0, 1) = 0.5;
    CHECK_THROWS_AS(NoiseProjector(g, bad, 1), std::invalid_argument);
    CHECK_THROWS_AS(NoiseProjector(g, CMatrix::Identity(3, 3), 1), std::invalid_argument);
}

TEST_CASE("grid_search: noiseless three sources recovered within half a degree") {
    const auto g = ArrayGeometry::uniform_circular(12);
    const auto src = paper_sources();
    const auto r = grid_search(noiseless_projector(g, src), GridSpec{}, 3);
    REQUIRE(r.peaks.size() == 3);
    CHECK(!r.shortfall);
    CHECK(r.evaluations == 361 * 91);
    for (int l = 0; l < 3; ++l) {
        bool found = false;
        for (const auto& pk : r.peaks)
            found |= std::abs(pk.azimuth_deg - src.azimuths_deg[l]) <= 0.5 &&
                     std::abs(pk.elevation_deg - src.elevations_deg[l]) <= 0.5;
        CHECK(found);
    }
    for (std::size_t k = 1; k < r.peaks.size(); ++k) CHECK(r.peaks[k - 1].value >= r.peaks[k].value);
}

TEST_CASE("grid_search: constant spectrum has no strict maxima") {
    const auto g = ArrayGeometry::uniform_circular(6);
    const NoiseProjector p(g, CMatrix::Identity(6, 6), 0);
    GridSpec spec;
    spec.azimuth_samples = 37;
    spec.elevation_samples = 10;
    const auto r = grid_search(p, spec, 2);
    CHECK(r.shortfall);
    CHECK(r.peaks.empty());
    CHECK(r.evaluations == 370);
}

TEST_CASE("grid_search: deterministic and matches evaluate_spectrum") {
    const auto g = ArrayGeometry::uniform_circular(12);
    const NoiseProjector p(g, subspace_split(sample_covariance(synthesize_snapshots(g, paper_sources(), 0.0, 100, 2)), 3));
    GridSpec spec;
    spec.azimuth_samples = 121;
    spec.elevation_samples = 31;
    const auto a = grid_search(p, spec, 3), b = grid_search(p, spec, 3);
    REQUIRE(a.peaks.size() == b.peaks.size());
    for (std::size_t k = 0; k < a.peaks.size(); ++k) {
        CHECK(a.peaks[k].azimuth_deg == b.peaks[k].azimuth_deg);
        CHECK(a.peaks[k].value == b.peaks[k].value);
    }
    const auto grid = evaluate_spectrum(p, spec);
    REQUIRE(grid.values.size() == static_cast<std::size_t>(spec.points()));
    for (const auto& pk : a.peaks) {
        const int i = static_cast<int>(std::lround((pk.azimuth_deg - spec.azimuth_lo) / spec.azimuth_step()));
        const int j = static_cast<int>(std::lround((pk.elevation_deg - spec.elevation_lo) / spec.elevation_step()));
        CHECK(grid.at(i, j) == pk.value);
        CHECK(music_value(p, pk.azimuth_deg * kDeg, pk.elevation_deg * kDeg) == doctest::Approx(pk.value));
    }
}

TEST_CASE("GridSpec validation") {
    GridSpec s;
    CHECK_NOTHROW(s.validate());
    s.azimuth_samples = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = GridSpec{};
    s.elevation_hi = 95;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("flop model: closed forms") {
    FlopModel m;
    // 144 * 5 + 32851 * 13 * 9
    CHECK(flops_music(m) == 3'844'287.0);
    // 144 * 5 + 20 * 256 * (13 * 9 + 255)
    CHECK(flops_population(m) == 1'905'360.0);
    m.num_elements = 128;
    m.num_sources = 10;
    CHECK(flops_music(m) == 16384.0 * 12 + 32851.0 * 129 * 118);
    CHECK(flops_population(m) == 16384.0 * 12 + 20.0 * 256 * (129 * 118 + 255));
    m.num_sources = 128;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("complexity_table: ordering and ratio") {
    const auto t = complexity_table();
    REQUIRE(t.size() == 9);
    const int ms[] = {12, 32, 128}, ls[] = {1, 3, 10};
    for (int i = 0; i < 9; ++i) {
        CHECK(t[i].num_sources == ls[i / 3]);
        CHECK(t[i].num_elements == ms[i % 3]);
        CHECK(t[i].ratio == doctest::Approx(t[i].population_mflops / t[i].music_mflops));
    }
}
