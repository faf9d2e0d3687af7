#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "glctkit/errors.hpp"
#include "glctkit/graph.hpp"
#include "glctkit/uncertainty.hpp"

using namespace glctkit;

namespace {

struct Fixture {
    GlctOperator op;
    Limiter d;
    Limiter b;
};

Fixture cycle_setup() {
    GlctOperator op = build_operator(cycle_graph(32), {0.8, 32.0, 0.5, 1.0});
    Limiter d = vertex_limiter(VertexSet(IndexSet::range(0, 16, 32)));
    Limiter b = spectral_limiter(SpectralSet::range(0, 4, 32), op);
    return {std::move(op), std::move(d), std::move(b)};
}

}  // namespace

TEST(Concentration, PairOfIndicator) {
    const Fixture s = cycle_setup();
    CVector x = CVector::Zero(32);
    x(0) = 1.0;
    x(20) = 1.0;
    const ConcentrationPair p = concentration_pair(x, s.d, s.b);
    EXPECT_NEAR(p.zeta, std::sqrt(0.5), 1e-15);
    EXPECT_GE(p.eta, 0.0);
    EXPECT_LE(p.eta, 1.0);
    EXPECT_THROW(concentration_pair(CVector::Zero(32), s.d, s.b), ValidationError);
}

TEST(CornerLambdas, InUnitInterval) {
    const Fixture s = cycle_setup();
    const CornerLambdas c = corner_lambdas(s.d, s.b);
    for (double v : {c.lam_bdb, c.lam_bdbarb, c.lam_bbardbbar, c.lam_all_bar}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
}

TEST(Admissibility, RandomSignalsLieInRegion) {
    const Fixture s = cycle_setup();
    const CornerLambdas c = corner_lambdas(s.d, s.b);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        CVector x(32);
        for (int i = 0; i < 32; ++i) {
            x(i) = Complex(g(rng), g(rng));
        }
        // Bias half the draws toward the band or toward the vertex set.
        if (trial % 3 == 1) {
            x = s.b.matrix * x + 0.05 * x;
        } else if (trial % 3 == 2) {
            x = s.d.matrix * x + 0.05 * x;
        }
        EXPECT_TRUE(admissible(concentration_pair(x, s.d, s.b), c)) << "trial " << trial;
    }
}

TEST(Admissibility, TopEigenvectorTouchesUpperRightCurve) {
    const Fixture s = cycle_setup();
    const CornerLambdas c = corner_lambdas(s.d, s.b);
    const CVector g = joint_top_eigenpair(s.b, s.d).second;
    const ConcentrationPair p = concentration_pair(g, s.d, s.b);
    EXPECT_NEAR(p.zeta, std::sqrt(c.lam_bdb), 1e-10);
    EXPECT_NEAR(p.eta, 1.0, 1e-10);
    EXPECT_NEAR(admissibility_slacks(p, c)[0], 0.0, 1e-6);
}

TEST(Admissibility, OutsidePointRejected) {
    CornerLambdas c{0.5, 0.5, 0.5, 0.5};
    EXPECT_FALSE(admissible({1.0, 1.0}, c));
    EXPECT_TRUE(admissible({std::sqrt(0.5), std::sqrt(0.5)}, c));
}

TEST(UpperBound, ClosedFormValues) {
    EXPECT_NEAR(lemma2_upper_bound(std::sqrt(0.3), 0.3), 1.0, 1e-15);
    EXPECT_NEAR(lemma2_upper_bound(1.0, 0.36), 0.6, 1e-15);
    EXPECT_NEAR(lemma2_upper_bound(0.0, 0.36), 0.8, 1e-15);
    EXPECT_NEAR(lemma2_upper_bound(0.5, 1.0), 0.5, 1e-15);
}

TEST(BoundaryCurve, UpperRightMatchesClosedForm) {
    const CornerLambdas c{0.64, 0.2, 0.3, 0.1};
    const auto curve = boundary_curve(Corner::UpperRight, c, 33);
    ASSERT_EQ(curve.size(), 33u);
    EXPECT_NEAR(curve.front().zeta, 0.8, 1e-15);
    EXPECT_NEAR(curve.front().eta, 1.0, 1e-15);
    EXPECT_NEAR(curve.back().zeta, 1.0, 1e-15);
    EXPECT_NEAR(curve.back().eta, 0.8, 1e-15);
    for (const CurvePoint& p : curve) {
        EXPECT_NEAR(p.eta, lemma2_upper_bound(p.zeta, c.lam_bdb), 1e-12);
    }
}

TEST(BoundaryCurve, EachCornerIsTightForItsInequality) {
    const CornerLambdas c{0.64, 0.2, 0.3, 0.1};
    const Corner corners[] = {Corner::UpperRight, Corner::UpperLeft, Corner::LowerRight, Corner::LowerLeft};
    for (int k = 0; k < 4; ++k) {
        for (const CurvePoint& p : boundary_curve(corners[k], c, 17)) {
            EXPECT_NEAR(admissibility_slacks({p.zeta, p.eta}, c)[k], 0.0, 1e-7) << to_string(corners[k]);
        }
    }
    EXPECT_THROW(boundary_curve(Corner::UpperRight, c, 1), ValidationError);
}

TEST(RegionCsv, HeaderAndRowCount) {
    std::ostringstream out;
    write_region_csv({0.64, 0.2, 0.3, 0.1}, 8, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "zeta,eta,corner");
    int rows = 0;
    int ll = 0;
    while (std::getline(in, line)) {
        ++rows;
        ll += line.ends_with(",LL") ? 1 : 0;
    }
    EXPECT_EQ(rows, 32);
    EXPECT_EQ(ll, 8);
}
