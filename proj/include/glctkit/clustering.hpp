#pragma once

#include <cstdint>
#include <vector>

#include "glctkit/linalg.hpp"

namespace glctkit {

struct KMeansOptions {
    int restarts = 20;
    int max_iterations = 300;
    double tolerance = 1e-8;  // largest centroid movement that still counts as converged
};

struct KMeansResult {
    std::vector<int> assignments;
    RMatrix centroids;  // k x d
    double inertia = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding; the lowest-inertia restart wins.
/// Rows of `points` are observations.
KMeansResult kmeans(const RMatrix& points, int k, std::uint64_t seed, const KMeansOptions& opts = {});

/// Mean silhouette (b - a) / max(a, b) with Euclidean distance. Points in singleton
/// clusters, and points with a = b = 0, score 0. Fewer than two non-empty clusters gives 0.
double silhouette(const RMatrix& points, const std::vector<int>& assignments);

struct ClusterScore {
    std::vector<int> assignments;
    double silhouette = 0.0;
};

ClusterScore cluster_and_score(const RMatrix& points, int k, std::uint64_t seed,
                               const KMeansOptions& opts = {});

}  // namespace glctkit
