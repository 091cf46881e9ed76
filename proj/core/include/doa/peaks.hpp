#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "doa/optimizer.hpp"

namespace doa {

inline constexpr int kNoise = -1;

struct ClusterLabeling {
    std::vector<int> labels;  // cluster id in [0, cluster_count) or kNoise
    int cluster_count = 0;
};

struct DoaEstimate {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    double fitness = 0.0;
    std::optional<int> cluster_id;
    std::size_t source_index = 0;  // index of the representative in the population
};

struct Extraction {
    std::vector<DoaEstimate> estimates;  // descending by fitness
    bool shortfall = false;              // fewer candidates than requested
};

/// DBSCAN on flat Euclidean (theta, phi). A point is core when at least
/// `min_pts` points, itself included, lie within `eps`. Points are scanned in
/// input order and clusters are grown breadth-first, so a border point
/// reachable from two clusters joins whichever was created first.
ClusterLabeling dbscan(std::span<const Point> points, double eps, int min_pts);

struct DbscanParams {
    double eps = 3.0;
    int min_pts = 4;
};

/// One representative (highest fitness, lower index on ties) per DBSCAN
/// cluster, best `count` kept. Noise points never represent.
Extraction extract_dbscan(const Population& pop, int count, const DbscanParams& params = {});

/// Individuals whose fitness strictly exceeds that of all k nearest
/// neighbours, best `count` kept. Requires k < |pop|.
Extraction extract_klocalmax(const Population& pop, int count, int k);

/// k-means++ seeded Lloyd iterations into exactly `count` clusters; one
/// representative per cluster. Requires |pop| >= count.
Extraction extract_kmeanspp(const Population& pop, int count, std::uint64_t seed);

enum class ExtractionMethod { DBSCAN, KLocalMax, KMeansPP };

std::string_view to_string(ExtractionMethod m);
ExtractionMethod parse_extraction(std::string_view id);

struct ExtractionParams {
    DbscanParams dbscan;
    int klocalmax_k = 8;
};

Extraction extract(ExtractionMethod method, const Population& pop, int count, const ExtractionParams& params,
                   std::uint64_t seed);

}  // namespace doa
