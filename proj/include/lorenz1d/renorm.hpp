#pragma once

#include "kneading.hpp"

#include <numeric>
#include <optional>
#include <set>

namespace lorenz1d {

struct NkCycle {
    std::vector<double> points; // sorted z_0 < ... < z_{n-1}
    int n = 0;
    int k = 0;
    bool primary = false;
    Word word; // itinerary of z_0
};

inline std::optional<NkCycle> find_nk_cycle(const PiecewiseAffineMap& m, int n, int k, double tol = 1e-10)
{
    if (!(n > k && k >= 1) || std::gcd(n, k) != 1)
        throw PreconditionError("n(k)-cycle needs n > k >= 1 and gcd(n,k) = 1");
    std::string w;
    for (int j = 0; j < n; ++j)
        w.push_back((j * k) % n >= n - k ? '1' : '0');
    auto found = point_from_itinerary(m, Word(w));
    if (!found.ok())
        return std::nullopt;

    NkCycle cyc;
    cyc.n = n;
    cyc.k = k;
    cyc.word = Word(w);
    cyc.points = found.orbit.points;
    std::sort(cyc.points.begin(), cyc.points.end());
    const auto& z = cyc.points;
    const double c = m.critical();
    for (int j = 0; j < n; ++j) {
        if ((j < n - k) != (z[j] < c))
            return std::nullopt;
        if (std::abs(m(z[j]) - z[(j + k) % n]) > tol)
            return std::nullopt;
    }
    const double slack = 1e-12;
    cyc.primary = z[k - 1] <= m.at_zero() + slack && m.at_one() <= z[k] + slack;
    return cyc;
}

enum class RenormStatus { analytic, symbolic_only, rejected };

inline const char* to_string(RenormStatus s)
{
    switch (s) {
    case RenormStatus::analytic: return "analytic";
    case RenormStatus::symbolic_only: return "symbolic_only";
    default: return "rejected";
    }
}

struct Renormalization {
    RenormStatus status = RenormStatus::rejected;
    std::string reason;
    int l = 0, r = 0;
    double u = std::nan(""), v = std::nan("");
    std::optional<ExpandingLorenzMap> child;
    AffineBranch g_left, g_right; // F^l on [u,c), F^r on (c,v]
};

struct IntervalImage {
    double a, b;
    AffineBranch g{1, 0};
    bool ok = true;
};

// Pushes [a,b] forward `steps` times, requiring each intermediate image to
// stay on one side of c.
inline IntervalImage push_interval(const PiecewiseAffineMap& m, double a, double b, int first_symbol, int steps,
                                   double tol)
{
    IntervalImage im{a, b};
    const double c = m.critical();
    for (int j = 0; j < steps; ++j) {
        int sym;
        if (j == 0)
            sym = first_symbol;
        else if (im.b <= c + tol)
            sym = 0;
        else if (im.a >= c - tol)
            sym = 1;
        else {
            im.ok = false;
            return im;
        }
        const auto& br = m.branch(sym);
        im.a = br(im.a);
        im.b = br(im.b);
        im.g = compose(br, im.g);
    }
    return im;
}

// Symbolic renormalization: eta+ and eta- are concatenations of the blocks
// R = eta+[0,r) and L = eta-[0,l).
inline bool symbolic_renormalizable(const KneadingInvariant& k, int l, int r)
{
    const std::string& p = k.plus_prefix;
    const std::string& q = k.minus_prefix;
    if (p.size() < std::size_t(r) || q.size() < std::size_t(l))
        return false;
    const std::string R = p.substr(0, r), L = q.substr(0, l);
    if (R[0] != '1' || L[0] != '0')
        return false;
    auto parses = [&](const std::string& s) {
        std::size_t pos = 0;
        while (pos < s.size()) {
            const std::string& blk = s[pos] == '1' ? R : L;
            std::size_t len = std::min(blk.size(), s.size() - pos);
            if (s.compare(pos, len, blk, 0, len) != 0)
                return false;
            pos += len;
        }
        return true;
    };
    return parses(p) && parses(q);
}

inline Renormalization renormalize(const ExpandingLorenzMap& m, int l, int r, double tol = 1e-9)
{
    if (l < 2 || r < 2)
        throw PreconditionError("return times must be > 1");
    Renormalization out;
    out.l = l;
    out.r = r;
    SidedPoint up = critical_plus(m), vp = critical_minus(m);
    for (int j = 0; j < r; ++j)
        up = eval(m, up);
    for (int j = 0; j < l; ++j)
        vp = eval(m, vp);
    out.u = up.x;
    out.v = vp.x;
    const double c = m.critical(), u = out.u, v = out.v;

    auto reject = [&](std::string why) {
        out.reason = std::move(why);
        out.status = symbolic_renormalizable(kneading(m, 64), l, r) ? RenormStatus::symbolic_only
                                                                    : RenormStatus::rejected;
        return out;
    };

    if (!(u < c && c < v))
        return reject("c not inside [u,v]");
    auto left = push_interval(m, u, c, 0, l, tol);
    auto right = push_interval(m, c, v, 1, r, tol);
    if (!left.ok || !right.ok)
        return reject("an intermediate image of a half-interval straddles c");
    out.g_left = left.g;
    out.g_right = right.g;
    if (left.a < u - tol || right.b > v + tol)
        return reject("return map does not keep [u,v] invariant");
    if (!(u > tol && v < 1 - tol))
        return reject("[u,v] is not a proper subinterval of (0,1)");

    const double w = v - u;
    AffineBranch cl{left.g.slope, (left.g(u) - u) / w};
    AffineBranch cr{right.g.slope, (right.g(u) - u) / w};
    try {
        out.child.emplace(cl, cr, (c - u) / w, MapKind::generic, tol);
    } catch (const PreconditionError& e) {
        return reject(std::string("child fails Lorenz normalization: ") + e.what());
    }
    if (std::abs(cl.slope - cr.slope) < 1e-12)
        out.child->set_beta_alpha(cl.slope, cl.offset);
    out.status = RenormStatus::analytic;
    return out;
}

inline std::vector<Renormalization> renorm_tower(double beta)
{
    std::vector<Renormalization> tower;
    if (beta > std::sqrt(2.0) + 1e-12)
        return tower;
    ExpandingLorenzMap m = symmetric_beta(beta);
    for (int depth = 0; depth < 64; ++depth) {
        auto g = renormalize(m, 2, 2);
        if (g.status != RenormStatus::analytic)
            break;
        m = *g.child;
        tower.push_back(std::move(g));
    }
    return tower;
}

inline double child_beta(const Renormalization& g) { return g.child ? g.child->left().slope : std::nan(""); }

inline double max_grid_deviation(const PiecewiseAffineMap& a, const PiecewiseAffineMap& b, int points)
{
    double worst = 0;
    for (int j = 0; j < points; ++j) {
        double x = (j + 0.5) / points;
        if (std::abs(x - a.critical()) < 1e-9 || std::abs(x - b.critical()) < 1e-9)
            continue;
        worst = std::max(worst, std::abs(a(x) - b(x)));
    }
    return worst;
}

inline std::set<std::size_t> period_set(const PiecewiseAffineMap& m, std::size_t max_period)
{
    std::set<std::size_t> out;
    for (const auto& o : periodic_orbits(m, max_period))
        out.insert(o.period());
    return out;
}

struct PeriodAlgebra {
    std::set<std::size_t> periods;
    std::optional<std::set<std::size_t>> predicted; // n P_G u {n}, truncated
    bool consistent = true;
};

// Brute-force period set; when a primary 2(1)-cycle gives a (2,2)
// renormalization, compares against 2 P_G u {2} from the child.
inline PeriodAlgebra period_set_checked(const ExpandingLorenzMap& m, std::size_t max_period)
{
    PeriodAlgebra out;
    out.periods = period_set(m, max_period);
    auto cyc = find_nk_cycle(m, 2, 1);
    if (!cyc || !cyc->primary)
        return out;
    auto g = renormalize(m, 2, 2);
    if (g.status != RenormStatus::analytic)
        return out;
    std::set<std::size_t> pred{2};
    for (auto p : period_set(*g.child, max_period / 2))
        if (2 * p <= max_period)
            pred.insert(2 * p);
    out.consistent = pred == out.periods;
    out.predicted = std::move(pred);
    return out;
}

struct FullRenormalization {
    std::optional<int> index;
    bool certified = false;
};

inline FullRenormalization is_fully_renormalizable(double beta, double tol = 1e-12)
{
    if (!(beta > 1 && beta <= 2))
        throw PreconditionError("beta must lie in (1,2]");
    FullRenormalization out;
    for (int i = 1; i <= 20; ++i)
        if (std::abs(beta - beta_ladder(i)) < tol)
            out.index = i;
    if (!out.index)
        return out;
    auto tower = renorm_tower(beta);
    if (int(tower.size()) == *out.index) {
        const auto& f = *tower.back().child;
        out.certified = max_grid_deviation(f, symmetric_beta(2.0), 1000) < 1e-6;
    }
    return out;
}

struct MatchingResult {
    std::optional<int> index;
    double residual = std::nan("");
};

inline MatchingResult matching_index(const PiecewiseAffineMap& m, int max_n = 64, double tol = 1e-8)
{
    if (max_n > 64)
        throw PreconditionError("max_n must be <= 64");
    SidedPoint x = critical_plus(m), y = critical_minus(m);
    MatchingResult out;
    for (int n = 1; n <= max_n; ++n) {
        x = eval(m, x);
        y = eval(m, y);
        double d = std::abs(x.x - y.x);
        if (d < tol) {
            out.index = n;
            out.residual = d;
            return out;
        }
    }
    return out;
}

inline double matching_residual(const PiecewiseAffineMap& m, int n)
{
    SidedPoint x = critical_plus(m), y = critical_minus(m);
    for (int j = 0; j < n; ++j)
        x = eval(m, x), y = eval(m, y);
    return std::abs(x.x - y.x);
}

// Gluing of the images of (c-delta, c) and (c, c+delta): the first step at
// which F^j is continuous across c on a small neighbourhood.
inline std::optional<int> glue_step(const PiecewiseAffineMap& m, int max_n = 64, double delta = 1e-9,
                                    double tol = 1e-8)
{
    const double c = m.critical();
    struct Half {
        double inner, outer; // image of the endpoint at c, image of the far endpoint
        Side side;
    };
    Half lo{c, c - delta, Side::minus}, hi{c, c + delta, Side::plus};
    auto step = [&](Half& h) {
        int sym = symbol_of(m, {h.inner, h.side});
        if (std::abs(h.outer - c) > tol && std::abs(h.inner - c) > tol && (h.outer > c) != (h.inner > c))
            return false; // the half was cut by c
        const auto& br = m.branch(sym);
        h.inner = br(h.inner);
        h.outer = br(h.outer);
        return true;
    };
    for (int n = 1; n <= max_n; ++n) {
        if (!step(lo) || !step(hi))
            return std::nullopt;
        if (std::abs(lo.inner - hi.inner) < tol && (lo.outer - lo.inner) * (hi.outer - hi.inner) < 0)
            return n;
    }
    return std::nullopt;
}

struct CutPasteReport {
    bool vacuous = false;
    int left_hit_step = 0;  // first j < l with c in F^j([u,c)); 0 when clean
    int right_hit_step = 0; // first j < r with c in F^j((c,v]); 0 when clean
    std::optional<int> matching;
    std::optional<int> glue;
    bool general_cut_and_paste() const { return glue.has_value(); }
    bool clean() const { return left_hit_step == 0 && right_hit_step == 0; }
};

inline CutPasteReport cut_and_paste_check(const PiecewiseAffineMap& m, const Renormalization& g, double tol = 1e-12)
{
    CutPasteReport rep;
    rep.matching = matching_index(m).index;
    rep.glue = glue_step(m);
    if (g.status == RenormStatus::rejected) {
        rep.vacuous = true;
        return rep;
    }
    const double c = m.critical();
    // Interval with a closed far end and an open end at c.
    auto scan = [&](double closed_end, int first_symbol, int steps) {
        double a = closed_end, b = c; // a closed, b open
        int sym = first_symbol;
        for (int j = 1; j < steps; ++j) {
            const auto& br = m.branch(sym);
            a = br(a);
            b = br(b);
            double lo = std::min(a, b), hi = std::max(a, b);
            if (std::abs(a - c) <= tol)
                return j;
            if (lo < c - tol && hi > c + tol)
                return j;
            sym = (lo + hi) / 2 > c ? 1 : 0;
        }
        return 0;
    };
    rep.left_hit_step = scan(g.u, 0, g.l);
    rep.right_hit_step = scan(g.v, 1, g.r);
    return rep;
}

} // namespace lorenz1d
