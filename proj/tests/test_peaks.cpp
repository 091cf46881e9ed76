#include <doctest.h>

#include <algorithm>
#include <random>

#include "doa/peaks.hpp"
#include "oracles.hpp"

using namespace doa;

namespace {

Population make_pop(const std::vector<Point>& pts, const std::vector<double>& fit) {
    Population p;
    for (std::size_t i = 0; i < pts.size(); ++i) p.individuals.push_back({pts[i], fit[i]});
    return p;
}

// n points scattered within `spread` of each centre, fitness peaking at the centre.
Population clusters(const std::vector<Point>& centres, int per, double spread, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-spread, spread);
    Population p;
    for (const auto& c : centres)
        for (int k = 0; k < per; ++k) {
            const Point q{c.theta + u(rng), c.phi + u(rng)};
            p.individuals.push_back({q, 10.0 - distance(q, c)});
        }
    return p;
}

}  // namespace

TEST_CASE("dbscan: two blobs and an outlier") {
    const std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {50, 50}, {51, 50}, {50, 51}, {51, 51}, {200, 10}};
    const auto l = dbscan(pts, 1.5, 4);
    CHECK(l.cluster_count == 2);
    for (int i = 0; i < 4; ++i) CHECK(l.labels[i] == 0);
    for (int i = 4; i < 8; ++i) CHECK(l.labels[i] == 1);
    CHECK(l.labels[8] == kNoise);
}

TEST_CASE("dbscan: border point between two clusters joins the first") {
    // Left core group, right core group, border point b in the middle within
    // eps of one core on each side but itself not core.
    const std::vector<Point> pts{{0, 0}, {0, 0.5}, {0, -0.5}, {-0.5, 0}, {2, 0}, {4, 0}, {4, 0.5}, {4, -0.5},
                                 {4.5, 0}};
    const auto l = dbscan(pts, 2.0, 4);
    CHECK(l.cluster_count == 2);
    CHECK(l.labels[4] == 0);
    const auto ref = oracle::dbscan(pts, 2.0, 4);
    CHECK(ref.labels == l.labels);
}

TEST_CASE("dbscan: matches the union-find oracle on random instances") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 60; ++rep) {
        std::uniform_int_distribution<int> size(1, 256);
        const int n = size(rng);
        std::uniform_real_distribution<double> t(0, 60 + rep), p(0, 30);
        std::vector<Point> pts(n);
        for (auto& q : pts) q = {t(rng), p(rng)};
        // Some exact duplicates to exercise coincident cores.
        for (int k = 0; k < n / 10; ++k) pts[std::uniform_int_distribution<int>(0, n - 1)(rng)] = pts[0];
        const double eps = 1.0 + (rep % 5);
        const int min_pts = 2 + rep % 5;
        const auto got = dbscan(pts, eps, min_pts);
        const auto expect = oracle::dbscan(pts, eps, min_pts);
        CHECK(got.cluster_count == expect.clusters);
        CHECK(got.labels == expect.labels);
    }
}

TEST_CASE("dbscan: parameter checks and empty input") {
    const std::vector<Point> none;
    CHECK(dbscan(none, 1.0, 2).cluster_count == 0);
    CHECK_THROWS_AS(dbscan(none, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(dbscan(none, 1.0, 0), std::invalid_argument);
}

TEST_CASE("extract_dbscan: one representative per converged cluster") {
    const auto pop = clusters({{30, 60}, {120, 30}, {240, 45}}, 20, 1.0, 3);
    const auto e = extract_dbscan(pop, 3);
    REQUIRE(e.estimates.size() == 3);
    CHECK(!e.shortfall);
    for (std::size_t k = 1; k < 3; ++k) CHECK(e.estimates[k - 1].fitness >= e.estimates[k].fitness);
    for (const auto& est : e.estimates) {
        REQUIRE(est.cluster_id.has_value());
        // Representative is the fittest member of its cluster.
        for (std::size_t i = 0; i < pop.size(); ++i)
            if (distance(pop.individuals[i].position, {est.theta_deg, est.phi_deg}) < 3.0)
                CHECK(pop.individuals[i].fitness <= est.fitness);
        CHECK(pop.individuals[est.source_index].fitness == est.fitness);
    }
}

TEST_CASE("extract_dbscan: all-noise population is a shortfall") {
    const auto pop = make_pop({{0, 0}, {100, 0}, {200, 0}, {300, 0}}, {1, 2, 3, 4});
    const auto e = extract_dbscan(pop, 2);
    CHECK(e.estimates.empty());
    CHECK(e.shortfall);
}

TEST_CASE("extract_dbscan: equal fitness picks the lower index") {
    const auto pop = make_pop({{0, 0}, {0.5, 0}, {0, 0.5}, {0.5, 0.5}}, {1.0, 2.0, 2.0, 0.5});
    const auto e = extract_dbscan(pop, 1);
    REQUIRE(e.estimates.size() == 1);
    CHECK(e.estimates[0].source_index == 1);
}

TEST_CASE("extract_klocalmax: line with two bumps") {
    std::vector<Point> pts;
    std::vector<double> fit;
    for (int i = 0; i < 20; ++i) {
        pts.push_back({double(i), 0.0});
        fit.push_back(i < 10 ? -std::abs(i - 4.0) : -std::abs(i - 15.0) + 0.5);
    }
    const auto e = extract_klocalmax(make_pop(pts, fit), 3, 2);
    REQUIRE(e.estimates.size() == 2);
    CHECK(e.shortfall);
    CHECK(e.estimates[0].theta_deg == 15.0);
    CHECK(e.estimates[1].theta_deg == 4.0);
}

TEST_CASE("extract_klocalmax: k = |pop| - 1 leaves only the unique global best") {
    const auto pop = clusters({{30, 60}, {120, 30}}, 15, 2.0, 9);
    const auto e = extract_klocalmax(pop, 3, static_cast<int>(pop.size()) - 1);
    REQUIRE(e.estimates.size() == 1);
    CHECK(e.estimates[0].fitness == pop.best().fitness);
    CHECK_THROWS_AS(extract_klocalmax(pop, 3, static_cast<int>(pop.size())), std::invalid_argument);
}

TEST_CASE("extract_klocalmax: matches brute-force neighbourhood maxima") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> t(0, 50), p(0, 50), f(0, 1);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<Point> pts(60);
        std::vector<double> fit(60);
        for (int i = 0; i < 60; ++i) pts[i] = {t(rng), p(rng)}, fit[i] = f(rng);
        const auto pop = make_pop(pts, fit);
        const int k = 3 + rep % 6;
        std::vector<std::size_t> expect;
        for (std::size_t i = 0; i < 60; ++i) {
            const auto hood = oracle::knn(pop.individuals, i, k);
            bool mx = true;
            for (auto j : hood) mx &= fit[i] > fit[j];
            if (mx) expect.push_back(i);
        }
        const auto e = extract_klocalmax(pop, 60, k);
        std::vector<std::size_t> got;
        for (const auto& est : e.estimates) got.push_back(est.source_index);
        std::sort(got.begin(), got.end());
        CHECK(got == expect);
    }
}

TEST_CASE("extract_kmeanspp: single cluster returns the global best") {
    const auto pop = clusters({{30, 60}, {120, 30}, {240, 45}}, 10, 1.0, 1);
    const auto e = extract_kmeanspp(pop, 1, 7);
    REQUIRE(e.estimates.size() == 1);
    CHECK(e.estimates[0].fitness == pop.best().fitness);
}

TEST_CASE("extract_kmeanspp: agrees with DBSCAN on well-separated clusters") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto pop = clusters({{30, 60}, {120, 30}, {240, 45}}, 20, 1.0, seed);
        const auto a = extract_kmeanspp(pop, 3, seed * 31);
        const auto b = extract_dbscan(pop, 3);
        REQUIRE(a.estimates.size() == 3);
        REQUIRE(b.estimates.size() == 3);
        for (int k = 0; k < 3; ++k) CHECK(a.estimates[k].source_index == b.estimates[k].source_index);
    }
}

TEST_CASE("extract_kmeanspp: deterministic, never empty clusters") {
    const auto pop = clusters({{10, 10}}, 30, 5.0, 2);
    const auto a = extract_kmeanspp(pop, 5, 99), b = extract_kmeanspp(pop, 5, 99);
    REQUIRE(a.estimates.size() == 5);
    for (int k = 0; k < 5; ++k) CHECK(a.estimates[k].source_index == b.estimates[k].source_index);
    // Duplicated points force the refill path.
    const auto dup = make_pop({{1, 1}, {1, 1}, {1, 1}, {1, 1}, {2, 2}}, {1, 2, 3, 4, 5});
    const auto d = extract_kmeanspp(dup, 3, 4);
    CHECK(d.estimates.size() == 3);
    CHECK_THROWS_AS(extract_kmeanspp(dup, 6, 4), std::invalid_argument);
}

TEST_CASE("extraction method ids round-trip") {
    for (auto m : {ExtractionMethod::DBSCAN, ExtractionMethod::KLocalMax, ExtractionMethod::KMeansPP})
        CHECK(parse_extraction(to_string(m)) == m);
    CHECK_THROWS_AS(parse_extraction("meanshift"), std::invalid_argument);
}
