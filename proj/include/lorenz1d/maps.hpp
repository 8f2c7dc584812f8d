#pragma once

#include "symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace lorenz1d {

inline constexpr double tie_tolerance = 1e-12;
inline constexpr double recurrence_tolerance = 1e-12;
inline constexpr double validation_margin = 1e-9;

struct AffineBranch {
    double slope = 1;
    double offset = 0;

    double operator()(double x) const { return slope * x + offset; }
    double inverse(double y) const { return (y - offset) / slope; }
};

inline AffineBranch compose(const AffineBranch& outer, const AffineBranch& inner)
{
    return {outer.slope * inner.slope, outer.slope * inner.offset + outer.offset};
}

enum class MapKind { generic, beta, symmetric_beta, two_slope, factor };

inline const char* to_string(MapKind k)
{
    switch (k) {
    case MapKind::beta: return "beta";
    case MapKind::symmetric_beta: return "symmetric_beta";
    case MapKind::two_slope: return "two_slope";
    case MapKind::factor: return "factor";
    default: return "generic";
    }
}

// Two increasing affine branches on [0,c) and (c,1]. No normalization at c
// is assumed here; ExpandingLorenzMap adds it.
class PiecewiseAffineMap {
public:
    PiecewiseAffineMap(AffineBranch left, AffineBranch right, double critical, MapKind kind = MapKind::generic)
        : left_(left), right_(right), c_(critical), kind_(kind)
    {
        if (!(left.slope > 0 && right.slope > 0))
            throw PreconditionError("branches must be increasing");
        if (!(critical > 0 && critical < 1))
            throw PreconditionError("critical point must lie in (0,1)");
    }

    const AffineBranch& left() const { return left_; }
    const AffineBranch& right() const { return right_; }
    const AffineBranch& branch(int symbol) const { return symbol ? right_ : left_; }
    double critical() const { return c_; }
    MapKind kind() const { return kind_; }

    // Plain evaluation off the critical point.
    double operator()(double x) const { return x < c_ ? left_(x) : right_(x); }

    double at_zero() const { return left_(0.0); }
    double at_one() const { return right_(1.0); }
    double left_limit() const { return left_(c_); }   // F(c-)
    double right_limit() const { return right_(c_); } // F(c+)

protected:
    AffineBranch left_, right_;
    double c_;
    MapKind kind_;
};

class ExpandingLorenzMap : public PiecewiseAffineMap {
public:
    ExpandingLorenzMap(AffineBranch left, AffineBranch right, double critical, MapKind kind = MapKind::generic,
                       double norm_tol = 1e-12)
        : PiecewiseAffineMap(left, right, critical, kind)
    {
        if (!(left.slope > 1 && right.slope > 1))
            throw PreconditionError("expanding Lorenz map needs both slopes > 1");
        if (std::abs(right_limit()) > norm_tol || std::abs(left_limit() - 1) > norm_tol)
            throw PreconditionError("Lorenz normalization F(c+)=0, F(c-)=1 violated");
        if (at_zero() < -norm_tol || at_one() > 1 + norm_tol)
            throw PreconditionError("map must send [0,1] into itself");
    }

    double beta() const { return beta_; }
    double alpha() const { return alpha_; }
    void set_beta_alpha(double b, double a) { beta_ = b, alpha_ = a; }

private:
    double beta_ = std::nan("");
    double alpha_ = std::nan("");
};

// F(x) = beta x + alpha mod 1, critical point (1-alpha)/beta.
inline ExpandingLorenzMap beta_transform(double beta, double alpha)
{
    if (!(beta > 1 && beta <= 2))
        throw PreconditionError("beta must lie in (1,2]");
    if (!(alpha >= 0 && alpha <= 2 - beta))
        throw PreconditionError("alpha must lie in [0, 2-beta]");
    double c = (1 - alpha) / beta;
    ExpandingLorenzMap m({beta, alpha}, {beta, alpha - 1}, c, MapKind::beta);
    m.set_beta_alpha(beta, alpha);
    return m;
}

inline ExpandingLorenzMap symmetric_beta(double beta)
{
    if (!(beta > 1 && beta <= 2))
        throw PreconditionError("beta must lie in (1,2]");
    double alpha = 1 - beta / 2;
    ExpandingLorenzMap m({beta, alpha}, {beta, -beta / 2}, 0.5, MapKind::symmetric_beta);
    m.set_beta_alpha(beta, alpha);
    return m;
}

enum class Side { none, plus, minus };

struct SidedPoint {
    double x = 0;
    Side side = Side::none;
};

inline SidedPoint critical_plus(const PiecewiseAffineMap& m) { return {m.critical(), Side::plus}; }
inline SidedPoint critical_minus(const PiecewiseAffineMap& m) { return {m.critical(), Side::minus}; }

// Branch symbol of p; the side tag decides inside the tie band.
inline int symbol_of(const PiecewiseAffineMap& m, const SidedPoint& p)
{
    if (std::abs(p.x - m.critical()) < tie_tolerance) {
        if (p.side == Side::none)
            throw PreconditionError("point within tie band of c needs a side tag");
        return p.side == Side::plus ? 1 : 0;
    }
    return p.x > m.critical() ? 1 : 0;
}

inline SidedPoint eval(const PiecewiseAffineMap& m, const SidedPoint& p)
{
    if (!(p.x >= 0 && p.x <= 1))
        throw PreconditionError("point outside [0,1]");
    double y = m.branch(symbol_of(m, p))(p.x);
    return {std::clamp(y, 0.0, 1.0), p.side};
}

inline std::vector<SidedPoint> orbit(const PiecewiseAffineMap& m, SidedPoint p, std::size_t n)
{
    std::vector<SidedPoint> pts;
    pts.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        pts.push_back(p);
        if (k + 1 < n)
            p = eval(m, p);
    }
    return pts;
}

inline Word itinerary(const PiecewiseAffineMap& m, SidedPoint p, std::size_t n)
{
    if (n < 1)
        throw PreconditionError("itinerary length must be >= 1");
    std::string s;
    for (auto& q : orbit(m, p, n))
        s.push_back(char('0' + symbol_of(m, q)));
    return Word(s);
}

// One-sided itinerary with recurrence detection. `stream` is set when the
// orbit point recurs within the recurrence tolerance.
struct OneSidedKneading {
    std::string prefix;
    std::optional<SymbolStream> stream;
    std::vector<std::size_t> near_ties; // iterates resolved by the side tag only
};

inline OneSidedKneading one_sided_kneading(const PiecewiseAffineMap& m, SidedPoint start, std::size_t n)
{
    OneSidedKneading out;
    std::vector<double> seen;
    SidedPoint p = start;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            if (std::abs(p.x - seen[j]) < recurrence_tolerance) {
                // the orbit closes up: the rest of the prefix is the cycle
                out.stream = SymbolStream(out.prefix.substr(0, j), out.prefix.substr(j, k - j));
                out.prefix = out.stream->prefix(n);
                return out;
            }
        }
        if (k > 0 && std::abs(p.x - m.critical()) < tie_tolerance)
            out.near_ties.push_back(k);
        out.prefix.push_back(char('0' + symbol_of(m, p)));
        seen.push_back(p.x);
        if (k + 1 < n)
            p = eval(m, p);
    }
    return out;
}

struct KneadingInvariant {
    std::string plus_prefix;
    std::string minus_prefix;
    std::optional<SymbolStream> eta_plus;
    std::optional<SymbolStream> eta_minus;
    bool certified_periodic = false;
    std::vector<std::size_t> plus_near_ties;
    std::vector<std::size_t> minus_near_ties;

    bool flagged() const { return !plus_near_ties.empty() || !minus_near_ties.empty(); }
};

inline KneadingInvariant kneading(const PiecewiseAffineMap& m, std::size_t n = 64)
{
    if (n < 1)
        throw PreconditionError("kneading length must be >= 1");
    auto p = one_sided_kneading(m, critical_plus(m), n);
    auto q = one_sided_kneading(m, critical_minus(m), n);
    KneadingInvariant k;
    k.plus_prefix = p.prefix;
    k.minus_prefix = q.prefix;
    k.eta_plus = p.stream;
    k.eta_minus = q.stream;
    k.certified_periodic = p.stream && q.stream;
    k.plus_near_ties = p.near_ties;
    k.minus_near_ties = q.near_ties;
    return k;
}

enum class Rejection { none, orbit_mismatch, critical_collision };

inline const char* to_string(Rejection r)
{
    switch (r) {
    case Rejection::orbit_mismatch: return "orbit-mismatch";
    case Rejection::critical_collision: return "critical-collision";
    default: return "none";
    }
}

struct PeriodicOrbit {
    Word word;                 // itinerary of points[0]
    std::vector<double> points; // points[j] = F^j(points[0])
    std::size_t period() const { return word.size(); }
};

struct OrbitSearch {
    Rejection rejection = Rejection::none;
    PeriodicOrbit orbit;
    bool ok() const { return rejection == Rejection::none; }
};

// Periodic point with itinerary w^inf: fixed point of the composed affine
// map, remaining points by the contracting inverse branches.
inline OrbitSearch point_from_itinerary(const PiecewiseAffineMap& m, const Word& w,
                                        double margin = validation_margin)
{
    const std::size_t n = w.size();
    AffineBranch g{1, 0};
    for (std::size_t j = 0; j < n; ++j)
        g = compose(m.branch(w[j]), g);
    OrbitSearch res;
    res.orbit.word = w;
    auto& pts = res.orbit.points;
    pts.assign(n, 0.0);
    pts[0] = g.offset / (1 - g.slope);
    for (std::size_t j = n - 1; j >= 1; --j)
        pts[j] = m.branch(w[j]).inverse(j + 1 < n ? pts[j + 1] : pts[0]);

    bool collision = false;
    for (std::size_t j = 0; j < n; ++j) {
        double x = pts[j];
        double d = x - m.critical();
        if (x < -tie_tolerance || x > 1 + tie_tolerance) {
            res.rejection = Rejection::orbit_mismatch;
            return res;
        }
        if (std::abs(d) <= margin) {
            collision = true;
            continue;
        }
        if ((d > 0) != (w[j] == 1)) {
            res.rejection = Rejection::orbit_mismatch;
            return res;
        }
    }
    if (collision)
        res.rejection = Rejection::critical_collision;
    return res;
}

// Lyndon words of length 1..n in lexicographic order (Duval).
template <class Visit>
void for_each_lyndon_word(std::size_t n, Visit&& visit)
{
    std::string w = "0";
    visit(std::as_const(w));
    for (;;) {
        std::size_t m = w.size();
        std::string next;
        next.reserve(n);
        while (next.size() < n)
            next.push_back(w[next.size() % m]);
        while (!next.empty() && next.back() == '1')
            next.pop_back();
        if (next.empty())
            return;
        next.back() = '1';
        w = std::move(next);
        visit(std::as_const(w));
    }
}

inline std::vector<std::string> lyndon_words(std::size_t length)
{
    std::vector<std::string> out;
    for_each_lyndon_word(length, [&](const std::string& w) {
        if (w.size() == length)
            out.push_back(w);
    });
    return out;
}

// All periodic orbits up to max_period, one per cycle, each reported from
// its leftmost point (whose itinerary is the Lyndon rotation), sorted by
// (period, point).
inline std::vector<PeriodicOrbit> periodic_orbits(const PiecewiseAffineMap& m, std::size_t max_period,
                                                  double margin = validation_margin)
{
    if (max_period > 24)
        throw PreconditionError("max_period above 24 is not supported");
    std::vector<PeriodicOrbit> out;
    if (max_period == 0)
        return out;
    for_each_lyndon_word(max_period, [&](const std::string& w) {
        auto r = point_from_itinerary(m, Word(w), margin);
        if (r.ok())
            out.push_back(std::move(r.orbit));
    });
    std::sort(out.begin(), out.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        if (a.period() != b.period())
            return a.period() < b.period();
        return a.points[0] < b.points[0];
    });
    return out;
}

// The beta-transformation with beta^4 = beta + 1 and alpha = 1 - 1/beta,
// whose critical orbits are periodic with periods 4 and 3.
inline double matching_example_beta()
{
    double a = 1.1, b = 1.3;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        double mid = 0.5 * (a + b);
        (std::pow(mid, 4) - mid - 1 < 0 ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

inline ExpandingLorenzMap matching_example_map()
{
    double beta = matching_example_beta();
    return beta_transform(beta, 1 - 1 / beta);
}

} // namespace lorenz1d
