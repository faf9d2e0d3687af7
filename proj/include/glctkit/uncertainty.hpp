#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "glctkit/localization.hpp"

namespace glctkit {

/// The four maximal eigenvalues that shape the admissible region.
struct CornerLambdas {
    double lam_bdb = 0.0;        // lambda_max(B D B)
    double lam_bdbarb = 0.0;     // lambda_max(B Dbar B)
    double lam_bbardbbar = 0.0;  // lambda_max(Bbar D Bbar)
    double lam_all_bar = 0.0;    // lambda_max(Bbar Dbar Bbar)
};

/// Fraction of energy (as a norm ratio) kept by the vertex and spectral projectors.
struct ConcentrationPair {
    double zeta = 0.0;
    double eta = 0.0;
};

enum class Corner { UpperRight, UpperLeft, LowerRight, LowerLeft };

struct CurvePoint {
    double zeta = 0.0;
    double eta = 0.0;
};

/// zeta = ||Dx|| / ||x||, eta = ||B x|| / ||x||.
ConcentrationPair concentration_pair(const SignalVector& x, const Limiter& d, const Limiter& b);

CornerLambdas corner_lambdas(const Limiter& d, const Limiter& b);

/// Membership in the admissible region: each of the four arccos inequalities
/// must hold with slack >= -tol.
bool admissible(const ConcentrationPair& pair, const CornerLambdas& c, double tol = 1e-9);

/// The four inequality slacks (lhs - rhs), in corner order UR, UL, LR, LL.
std::array<double, 4> admissibility_slacks(const ConcentrationPair& pair, const CornerLambdas& c);

/// zeta sqrt(lam) + sqrt((1 - zeta^2)(1 - lam)).
double lemma2_upper_bound(double zeta, double lam_max);

/// `grid` samples of the equality curve bounding the given corner.
std::vector<CurvePoint> boundary_curve(Corner corner, const CornerLambdas& c, int grid);

std::string to_string(Corner corner);

/// CSV `zeta,eta,corner` for all four corners.
void write_region_csv(const CornerLambdas& c, int grid, std::ostream& out);

}  // namespace glctkit
