#include "glctkit/clustering.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "glctkit/errors.hpp"

namespace glctkit {

namespace {

int nearest(const RMatrix& centroids, const RVector& p, double& dist2) {
    int best = 0;
    dist2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        const double d = (centroids.row(c).transpose() - p).squaredNorm();
        if (d < dist2) {
            dist2 = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

// Index of the first point whose cumulative weight exceeds u * total; uniform when all weights vanish.
int weighted_pick(const RVector& w, std::mt19937_64& rng) {
    const auto n = w.size();
    const double total = w.sum();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (!(total > 0.0)) {
        std::uniform_int_distribution<Eigen::Index> any(0, n - 1);
        return static_cast<int>(any(rng));
    }
    const double target = unit(rng) * total;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        acc += w(i);
        if (acc > target && w(i) > 0.0) {
            return static_cast<int>(i);
        }
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        if (w(i) > 0.0) {
            return static_cast<int>(i);
        }
    }
    return 0;
}

RMatrix plus_plus_seed(const RMatrix& x, int k, std::mt19937_64& rng) {
    const auto n = x.rows();
    RMatrix centroids(k, x.cols());
    std::uniform_int_distribution<Eigen::Index> any(0, n - 1);
    centroids.row(0) = x.row(any(rng));
    RVector d2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d2(i) = (x.row(i) - centroids.row(0)).squaredNorm();
    }
    for (int c = 1; c < k; ++c) {
        centroids.row(c) = x.row(weighted_pick(d2, rng));
        for (Eigen::Index i = 0; i < n; ++i) {
            d2(i) = std::min(d2(i), (x.row(i) - centroids.row(c)).squaredNorm());
        }
    }
    return centroids;
}

KMeansResult lloyd(const RMatrix& x, RMatrix centroids, const KMeansOptions& opts) {
    const auto n = x.rows();
    const auto k = centroids.rows();
    std::vector<int> assign(static_cast<std::size_t>(n), 0);
    RVector dist(n);
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double d2 = 0.0;
            assign[static_cast<std::size_t>(i)] = nearest(centroids, x.row(i).transpose(), d2);
            dist(i) = d2;
        }
        RMatrix next = RMatrix::Zero(k, x.cols());
        std::vector<int> count(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            next.row(assign[static_cast<std::size_t>(i)]) += x.row(i);
            ++count[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
        }
        for (Eigen::Index c = 0; c < k; ++c) {
            if (count[static_cast<std::size_t>(c)] > 0) {
                next.row(c) /= count[static_cast<std::size_t>(c)];
                continue;
            }
            // Empty cluster: move it onto the point farthest from its centroid.
            Eigen::Index far = 0;
            dist.maxCoeff(&far);
            next.row(c) = x.row(far);
            dist(far) = 0.0;
        }
        const double shift = (next - centroids).rowwise().norm().maxCoeff();
        centroids = std::move(next);
        if (shift <= opts.tolerance) {
            break;
        }
    }
    KMeansResult out{std::move(assign), std::move(centroids), 0.0};
    for (Eigen::Index i = 0; i < n; ++i) {
        double d2 = 0.0;
        out.assignments[static_cast<std::size_t>(i)] = nearest(out.centroids, x.row(i).transpose(), d2);
        out.inertia += d2;
    }
    return out;
}

}  // namespace

KMeansResult kmeans(const RMatrix& points, int k, std::uint64_t seed, const KMeansOptions& opts) {
    if (k < 2 || k > points.rows()) {
        throw ValidationError("cluster count must satisfy 2 <= k <= number of points");
    }
    if (opts.restarts < 1 || opts.max_iterations < 1) {
        throw ValidationError("k-means needs at least one restart and one iteration");
    }
    std::mt19937_64 rng(seed);
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < opts.restarts; ++r) {
        KMeansResult run = lloyd(points, plus_plus_seed(points, k, rng), opts);
        if (run.inertia < best.inertia) {
            best = std::move(run);
        }
    }
    return best;
}

double silhouette(const RMatrix& points, const std::vector<int>& assignments) {
    const auto n = points.rows();
    if (static_cast<std::size_t>(n) != assignments.size()) {
        throw ValidationError("assignment count does not match number of points");
    }
    if (n == 0) {
        return 0.0;
    }
    const int k = *std::max_element(assignments.begin(), assignments.end()) + 1;
    std::vector<int> size(static_cast<std::size_t>(k), 0);
    for (int a : assignments) {
        if (a < 0) {
            throw ValidationError("negative cluster label");
        }
        ++size[static_cast<std::size_t>(a)];
    }
    if (std::count_if(size.begin(), size.end(), [](int s) { return s > 0; }) < 2) {
        return 0.0;
    }
    double total = 0.0;
    std::vector<double> sums(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) {
                sums[static_cast<std::size_t>(assignments[static_cast<std::size_t>(j)])] +=
                    (points.row(i) - points.row(j)).norm();
            }
        }
        const int own = assignments[static_cast<std::size_t>(i)];
        if (size[static_cast<std::size_t>(own)] < 2) {
            continue;
        }
        const double a = sums[static_cast<std::size_t>(own)] / (size[static_cast<std::size_t>(own)] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c != own && size[static_cast<std::size_t>(c)] > 0) {
                b = std::min(b, sums[static_cast<std::size_t>(c)] / size[static_cast<std::size_t>(c)]);
            }
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) {
            total += (b - a) / denom;
        }
    }
    return total / static_cast<double>(n);
}

ClusterScore cluster_and_score(const RMatrix& points, int k, std::uint64_t seed,
                               const KMeansOptions& opts) {
    KMeansResult km = kmeans(points, k, seed, opts);
    const double s = silhouette(points, km.assignments);
    return {std::move(km.assignments), s};
}

}  // namespace glctkit
