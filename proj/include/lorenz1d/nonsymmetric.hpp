#pragma once

#include "maps.hpp"

namespace lorenz1d {

// f_{s,r}: r x on [0,1/2), 1 - s/2 + s(x - 1/2) on (1/2,1].
struct PerturbedFactorMap {
    double s, r;

    PerturbedFactorMap(double s_, double r_) : s(s_), r(r_)
    {
        if (!(s > 1 && s <= 2 && r > 1 && r <= 2))
            throw PreconditionError("s and r must lie in (1,2]");
    }

    double a() const { return 1 - s / 2; }
    double b() const { return r / 2; }
    PiecewiseAffineMap map() const { return {{r, 0}, {s, 1 - s}, 0.5, MapKind::factor}; }
};

inline double two_slope_critical(double s, double r) { return (s - 1) / (r + s - 2); }

// H_{s,r}: r x + 1 - r c on [0,c), s (x - c) on (c,1].
inline ExpandingLorenzMap two_slope_map(double s, double r)
{
    if (!(s > 1 && s <= 2 && r > 1 && r <= 2))
        throw PreconditionError("s and r must lie in (1,2]");
    double c = two_slope_critical(s, r);
    return {{r, 1 - r * c}, {s, -s * c}, c, MapKind::two_slope};
}

inline ExpandingLorenzMap rescale_to_H(const PerturbedFactorMap& f) { return two_slope_map(f.s, f.r); }

// h_{a,b} o f o h_{a,b}^{-1} computed from the branches of f.
inline PiecewiseAffineMap conjugate_to_unit(const PiecewiseAffineMap& f, double a, double b)
{
    const double w = b - a;
    auto conj = [&](const AffineBranch& br) { return AffineBranch{br.slope, (br(a) - a) / w}; };
    return {conj(f.left()), conj(f.right()), (f.critical() - a) / w};
}

struct RegionCurves {
    double L, U;
};

inline RegionCurves region_curves(double s)
{
    if (!(s > 1 && s <= std::sqrt(2.0) + 1e-12))
        throw PreconditionError("region curves are defined for s in (1, sqrt 2]");
    double s2 = s * s, s4 = s2 * s2;
    double L = 1 / (2 * s) + 0.5 * std::sqrt((8 * s2 - 9 * s + 2) / (s2 * (2 - s)));
    double U = (2 * s2 + s - 2) / (2 * s2) + 0.5 * std::sqrt((4 * s4 - 4 * s2 * s + s2 - 4 * s + 4) / s4);
    return {L, U};
}

inline bool in_region(double s, double r, double slack = 1e-12)
{
    if (!(s > 1 && s <= std::sqrt(2.0) + slack))
        return false;
    auto [L, U] = region_curves(s);
    return r >= L - slack && r <= U + slack;
}

struct CyclePoints {
    double c, z0, z1;
    double residual0, residual1; // |H(z0) - z1|, |H(z1) - z0|
    bool ordered, primary;
};

inline CyclePoints cycle_points(double s, double r)
{
    if (!in_region(s, r))
        throw PreconditionError("(s,r) outside the primary 2(1)-cycle region");
    auto H = two_slope_map(s, r);
    CyclePoints p;
    p.c = H.critical();
    p.z0 = s * (p.c + r * p.c - 1) / (r * s - 1);
    p.z1 = (r * p.c * (s + 1) - 1) / (r * s - 1);
    p.residual0 = std::abs(H.left()(p.z0) - p.z1);
    p.residual1 = std::abs(H.right()(p.z1) - p.z0);
    p.ordered = p.z0 < p.c && p.c < p.z1;
    const double slack = 1e-12;
    p.primary = p.z0 <= H.at_zero() + slack && H.at_one() <= p.z1 + slack;
    return p;
}

struct ConjugateBeta {
    double beta, alpha;
    bool certificate = false;
    std::string plus_prefix, minus_prefix;
};

inline ConjugateBeta conjugate_beta_alpha(double s, double r, std::size_t symbols = 48)
{
    auto H = two_slope_map(s, r);
    const double c = H.critical();
    const double beta = std::sqrt(r * s);
    const double h0 = 1 - r * c; // H(0)
    const double h1 = s * (1 - c); // H(1)
    const double alpha = 1 / (beta + 1) - beta * (beta - 1) * (c - h0) / ((beta + 1) * (h1 - h0));
    ConjugateBeta out{beta, alpha};
    auto kh = kneading(H, symbols);
    out.plus_prefix = kh.plus_prefix;
    out.minus_prefix = kh.minus_prefix;
    if (alpha >= 0 && alpha <= 2 - beta) {
        auto kf = kneading(beta_transform(beta, alpha), symbols);
        out.certificate = kf.plus_prefix == kh.plus_prefix && kf.minus_prefix == kh.minus_prefix;
    }
    return out;
}

} // namespace lorenz1d
