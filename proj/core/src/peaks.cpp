#include "doa/peaks.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace doa {

namespace {

std::vector<Point> positions_of(const Population& pop) {
    std::vector<Point> pts;
    pts.reserve(pop.size());
    for (const auto& ind : pop.individuals) pts.push_back(ind.position);
    return pts;
}

// Sort by fitness descending (stable, so earlier entries win ties) and trim.
Extraction finish(std::vector<DoaEstimate> reps, int count) {
    std::stable_sort(reps.begin(), reps.end(),
                     [](const DoaEstimate& a, const DoaEstimate& b) { return a.fitness > b.fitness; });
    Extraction out;
    out.shortfall = static_cast<int>(reps.size()) < count;
    if (static_cast<int>(reps.size()) > count) reps.resize(count);
    out.estimates = std::move(reps);
    return out;
}

DoaEstimate estimate_from(const Population& pop, std::size_t idx, std::optional<int> cluster) {
    const auto& ind = pop.individuals[idx];
    return {ind.position.theta, ind.position.phi, ind.fitness, cluster, idx};
}

// Highest fitness per label, lower index on ties.
std::vector<DoaEstimate> representatives(const Population& pop, const std::vector<int>& labels, int clusters) {
    std::vector<std::ptrdiff_t> best(clusters, -1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int c = labels[i];
        if (c < 0) continue;
        auto& b = best[c];
        if (b < 0 || pop.individuals[i].fitness > pop.individuals[static_cast<std::size_t>(b)].fitness)
            b = static_cast<std::ptrdiff_t>(i);
    }
    std::vector<DoaEstimate> reps;
    for (int c = 0; c < clusters; ++c)
        if (best[c] >= 0) reps.push_back(estimate_from(pop, static_cast<std::size_t>(best[c]), c));
    return reps;
}

}  // namespace

ClusterLabeling dbscan(std::span<const Point> points, double eps, int min_pts) {
    if (!(eps > 0.0)) throw std::invalid_argument("DBSCAN eps must be positive");
    if (min_pts < 1) throw std::invalid_argument("DBSCAN min_pts must be >= 1");

    const std::size_t n = points.size();
    const double eps2 = eps * eps;
    std::vector<std::vector<std::size_t>> hood(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (squared_distance(points[i], points[j]) <= eps2) hood[i].push_back(j);
    auto is_core = [&](std::size_t i) { return static_cast<int>(hood[i].size()) >= min_pts; };

    constexpr int kUnvisited = -2;
    ClusterLabeling out;
    out.labels.assign(n, kUnvisited);
    for (std::size_t i = 0; i < n; ++i) {
        if (out.labels[i] != kUnvisited) continue;
        if (!is_core(i)) {
            out.labels[i] = kNoise;
            continue;
        }
        const int cid = out.cluster_count++;
        out.labels[i] = cid;
        std::deque<std::size_t> frontier{i};
        while (!frontier.empty()) {
            const std::size_t p = frontier.front();
            frontier.pop_front();
            for (std::size_t q : hood[p]) {
                if (out.labels[q] == kNoise) out.labels[q] = cid;  // border point
                if (out.labels[q] != kUnvisited) continue;
                out.labels[q] = cid;
                if (is_core(q)) frontier.push_back(q);
            }
        }
    }
    return out;
}

Extraction extract_dbscan(const Population& pop, int count, const DbscanParams& params) {
    if (pop.size() == 0) throw std::invalid_argument("cannot extract peaks from an empty population");
    if (count < 0) throw std::invalid_argument("peak count must be non-negative");
    const auto pts = positions_of(pop);
    const auto labels = dbscan(pts, params.eps, params.min_pts);
    return finish(representatives(pop, labels.labels, labels.cluster_count), count);
}

Extraction extract_klocalmax(const Population& pop, int count, int k) {
    if (k < 1 || static_cast<std::size_t>(k) >= pop.size())
        throw std::invalid_argument("k-localmax needs 1 <= k < population size");
    std::vector<DoaEstimate> maxima;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const auto hood = nearest_neighbors(pop.individuals, i, k);
        const double f = pop.individuals[i].fitness;
        const bool is_max = std::all_of(hood.begin(), hood.end(),
                                        [&](std::size_t j) { return f > pop.individuals[j].fitness; });
        if (is_max) maxima.push_back(estimate_from(pop, i, std::nullopt));
    }
    return finish(std::move(maxima), count);
}

Extraction extract_kmeanspp(const Population& pop, int count, std::uint64_t seed) {
    const std::size_t n = pop.size();
    if (count < 1 || static_cast<std::size_t>(count) > n)
        throw std::invalid_argument("k-means++ needs 1 <= cluster count <= population size");
    const auto pts = positions_of(pop);
    std::mt19937_64 rng(seed);

    // Seeding: first centre uniform, the rest proportional to D^2.
    std::vector<Point> centres;
    centres.push_back(pts[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    while (static_cast<int>(centres.size()) < count) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(pts[i], centres.back()));
            total += d2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            double r = std::uniform_real_distribution<double>(0.0, total)(rng);
            for (pick = 0; pick + 1 < n; ++pick) {
                r -= d2[pick];
                if (r < 0.0) break;
            }
        } else {
            pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        }
        centres.push_back(pts[pick]);
    }

    std::vector<int> assign(n, -1);
    auto nearest_centre = [&](const Point& p) {
        int best = 0;
        double bd = squared_distance(p, centres[0]);
        for (int c = 1; c < count; ++c) {
            const double d = squared_distance(p, centres[c]);
            if (d < bd) {
                bd = d;
                best = c;
            }
        }
        return best;
    };

    constexpr int kMaxLloyd = 100;
    for (int iter = 0; iter < kMaxLloyd; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const int c = nearest_centre(pts[i]);
            if (c != assign[i]) {
                assign[i] = c;
                changed = true;
            }
        }
        // Refill empty clusters with the point farthest from its centre
        // among clusters that can spare one.
        std::vector<int> sizes(count, 0);
        for (int c : assign) ++sizes[c];
        for (int c = 0; c < count; ++c) {
            if (sizes[c] > 0) continue;
            std::ptrdiff_t far = -1;
            double fd = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[assign[i]] < 2) continue;
                const double d = squared_distance(pts[i], centres[assign[i]]);
                if (d > fd) {
                    fd = d;
                    far = static_cast<std::ptrdiff_t>(i);
                }
            }
            const auto f = static_cast<std::size_t>(far);
            --sizes[assign[f]];
            assign[f] = c;
            sizes[c] = 1;
            centres[c] = pts[f];
            changed = true;
        }
        if (!changed && iter > 0) break;
        std::vector<Point> sum(count, Point{0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) {
            sum[assign[i]].theta += pts[i].theta;
            sum[assign[i]].phi += pts[i].phi;
        }
        for (int c = 0; c < count; ++c) centres[c] = {sum[c].theta / sizes[c], sum[c].phi / sizes[c]};
    }
    return finish(representatives(pop, assign, count), count);
}

std::string_view to_string(ExtractionMethod m) {
    switch (m) {
        case ExtractionMethod::DBSCAN: return "dbscan";
        case ExtractionMethod::KLocalMax: return "klocalmax";
        case ExtractionMethod::KMeansPP: return "kmeanspp";
    }
    return "unknown";
}

ExtractionMethod parse_extraction(std::string_view id) {
    for (auto m : {ExtractionMethod::DBSCAN, ExtractionMethod::KLocalMax, ExtractionMethod::KMeansPP})
        if (to_string(m) == id) return m;
    throw std::invalid_argument("unknown extraction method: " + std::string(id));
}

Extraction extract(ExtractionMethod method, const Population& pop, int count, const ExtractionParams& params,
                   std::uint64_t seed) {
    switch (method) {
        case ExtractionMethod::DBSCAN: return extract_dbscan(pop, count, params.dbscan);
        case ExtractionMethod::KLocalMax: return extract_klocalmax(pop, count, params.klocalmax_k);
        case ExtractionMethod::KMeansPP: return extract_kmeanspp(pop, count, seed);
    }
    throw std::invalid_argument("unknown extraction method");
}

}  // namespace doa
