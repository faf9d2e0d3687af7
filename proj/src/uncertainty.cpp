#include "glctkit/uncertainty.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "glctkit/errors.hpp"
#include "glctkit/io.hpp"

namespace glctkit {

namespace {

double clamped_acos(double v) { return std::acos(std::clamp(v, -1.0, 1.0)); }

double safe_sqrt(double v) { return std::sqrt(std::max(0.0, v)); }

// Upper-right equality curve for a generic lambda, parameterized by the
// "inner" concentration u in [sqrt(lam), 1].
double ur_curve(double u, double lam) {
    return safe_sqrt(lam) * u + safe_sqrt(1.0 - lam) * safe_sqrt(1.0 - u * u);
}

}  // namespace

ConcentrationPair concentration_pair(const SignalVector& x, const Limiter& d, const Limiter& b) {
    if (x.size() != d.size() || x.size() != b.size()) {
        throw ValidationError("signal length does not match limiters");
    }
    const double norm = x.norm();
    if (norm == 0.0) {
        throw ValidationError("undefined for zero signal");
    }
    return {(d.matrix * x).norm() / norm, (b.matrix * x).norm() / norm};
}

CornerLambdas corner_lambdas(const Limiter& d, const Limiter& b) {
    const Limiter dbar = complement(d);
    const Limiter bbar = complement(b);
    return {joint_lambda_max(b, d), joint_lambda_max(b, dbar), joint_lambda_max(bbar, d),
            joint_lambda_max(bbar, dbar)};
}

std::array<double, 4> admissibility_slacks(const ConcentrationPair& pair, const CornerLambdas& c) {
    const double z = pair.zeta;
    const double e = pair.eta;
    const double zc = safe_sqrt(1.0 - z * z);
    const double ec = safe_sqrt(1.0 - e * e);
    return {
        clamped_acos(z) + clamped_acos(e) - clamped_acos(safe_sqrt(c.lam_bdb)),
        clamped_acos(zc) + clamped_acos(e) - clamped_acos(safe_sqrt(c.lam_bdbarb)),
        clamped_acos(z) + clamped_acos(ec) - clamped_acos(safe_sqrt(c.lam_bbardbbar)),
        clamped_acos(zc) + clamped_acos(ec) - clamped_acos(safe_sqrt(c.lam_all_bar)),
    };
}

bool admissible(const ConcentrationPair& pair, const CornerLambdas& c, double tol) {
    const auto s = admissibility_slacks(pair, c);
    return std::all_of(s.begin(), s.end(), [tol](double v) { return v >= -tol; });
}

double lemma2_upper_bound(double zeta, double lam_max) {
    return zeta * safe_sqrt(lam_max) + safe_sqrt((1.0 - zeta * zeta) * (1.0 - lam_max));
}

std::vector<CurvePoint> boundary_curve(Corner corner, const CornerLambdas& c, int grid) {
    if (grid < 2) {
        throw ValidationError("boundary curve needs at least 2 samples");
    }
    const double lam = [&] {
        switch (corner) {
            case Corner::UpperRight: return c.lam_bdb;
            case Corner::UpperLeft: return c.lam_bdbarb;
            case Corner::LowerRight: return c.lam_bbardbbar;
            case Corner::LowerLeft: return c.lam_all_bar;
        }
        return 0.0;
    }();
    // The curve is active for the inner variable u in [sqrt(lam), 1]; outside
    // that range the corresponding inequality holds trivially.
    const double lo = safe_sqrt(lam);
    std::vector<CurvePoint> out;
    out.reserve(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) {
        const double u = lo + (1.0 - lo) * static_cast<double>(i) / (grid - 1);
        const double v = ur_curve(u, lam);
        const bool flip_zeta = corner == Corner::UpperLeft || corner == Corner::LowerLeft;
        const bool flip_eta = corner == Corner::LowerRight || corner == Corner::LowerLeft;
        const double zeta = flip_zeta ? safe_sqrt(1.0 - u * u) : u;
        const double eta = flip_eta ? safe_sqrt(1.0 - v * v) : v;
        out.push_back({std::clamp(zeta, 0.0, 1.0), std::clamp(eta, 0.0, 1.0)});
    }
    return out;
}

std::string to_string(Corner corner) {
    switch (corner) {
        case Corner::UpperRight: return "UR";
        case Corner::UpperLeft: return "UL";
        case Corner::LowerRight: return "LR";
        case Corner::LowerLeft: return "LL";
    }
    return "?";
}

void write_region_csv(const CornerLambdas& c, int grid, std::ostream& out) {
    out << "zeta,eta,corner\n";
    for (Corner corner : {Corner::UpperRight, Corner::UpperLeft, Corner::LowerRight, Corner::LowerLeft}) {
        for (const auto& p : boundary_curve(corner, c, grid)) {
            out << io::format_double(p.zeta) << ',' << io::format_double(p.eta) << ','
                << to_string(corner) << '\n';
        }
    }
}

}  // namespace glctkit
