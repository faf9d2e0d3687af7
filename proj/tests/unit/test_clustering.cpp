#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "glctkit/clustering.hpp"
#include "glctkit/errors.hpp"

using namespace glctkit;

namespace {

RMatrix square_pairs() {
    RMatrix p(4, 2);
    p << 0, 0, 0, 1, 10, 0, 10, 1;
    return p;
}

}  // namespace

TEST(Silhouette, FourPointClosedForm) {
    const double expected = 1.0 - 2.0 / (10.0 + std::sqrt(101.0));
    EXPECT_NEAR(silhouette(square_pairs(), {0, 0, 1, 1}), expected, 1e-15);
}

TEST(Silhouette, Conventions) {
    // The singleton scores 0 but still counts in the average.
    RMatrix p(3, 1);
    p << 0, 1, 11;
    const double s0 = 1.0 - 1.0 / 11.0;
    const double s1 = 1.0 - 1.0 / 10.0;
    EXPECT_NEAR(silhouette(p, {0, 0, 1}), (s0 + s1) / 3.0, 1e-15);
    EXPECT_EQ(silhouette(p, {0, 0, 0}), 0.0);
    RMatrix same = RMatrix::Zero(4, 2);
    EXPECT_EQ(silhouette(same, {0, 0, 1, 1}), 0.0);
    EXPECT_THROW(silhouette(p, {0, 1}), ValidationError);
}

TEST(KMeans, SeparatesObviousClusters) {
    const KMeansResult r = kmeans(square_pairs(), 2, 7);
    EXPECT_EQ(r.assignments[0], r.assignments[1]);
    EXPECT_EQ(r.assignments[2], r.assignments[3]);
    EXPECT_NE(r.assignments[0], r.assignments[2]);
    EXPECT_NEAR(r.inertia, 1.0, 1e-12);
    EXPECT_EQ(r.centroids.rows(), 2);
}

TEST(KMeans, DeterministicForSeed) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    RMatrix p(60, 3);
    for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = g(rng) + (i % 60 < 20 ? 5.0 : 0.0);
    const KMeansResult a = kmeans(p, 3, 99);
    const KMeansResult b = kmeans(p, 3, 99);
    EXPECT_EQ(a.assignments, b.assignments);
    EXPECT_EQ(a.inertia, b.inertia);
}

TEST(KMeans, Preconditions) {
    EXPECT_THROW(kmeans(square_pairs(), 1, 0), ValidationError);
    EXPECT_THROW(kmeans(square_pairs(), 5, 0), ValidationError);
}

TEST(KMeans, DuplicatePointsDoNotCrash) {
    const RMatrix p = RMatrix::Ones(5, 2);
    const KMeansResult r = kmeans(p, 3, 1);
    EXPECT_EQ(r.assignments.size(), 5u);
    EXPECT_EQ(r.inertia, 0.0);
}

TEST(ClusterAndScore, MatchesComponents) {
    const ClusterScore c = cluster_and_score(square_pairs(), 2, 7);
    EXPECT_NEAR(c.silhouette, silhouette(square_pairs(), c.assignments), 0.0);
}
