#pragma once

#include "maps.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace lorenz1d {

// beta^i (beta - 2) + 1, the factored form of beta^{i+1} - 2 beta^i + 1.
inline double q_poly(int i, double beta)
{
    if (i < 2)
        throw PreconditionError("q_poly needs i >= 2");
    return std::pow(beta, i) * (beta - 2) + 1;
}

inline double epsilon(int i)
{
    if (i < 1)
        throw PreconditionError("epsilon needs i >= 1");
    double lo = std::sqrt(2.0);
    for (int k = 2; k <= i; ++k) {
        double a = lo, b = 2.0;
        // down to adjacent doubles
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (a + b);
            if (!(mid > a && mid < b))
                break;
            (q_poly(k, mid) < 0 ? a : b) = mid;
        }
        lo = std::abs(q_poly(k, a)) < std::abs(q_poly(k, b)) ? a : b;
    }
    return lo;
}

inline std::vector<double> epsilon_ladder(int imax)
{
    std::vector<double> out;
    for (int i = 1; i <= imax; ++i)
        out.push_back(epsilon(i));
    return out;
}

// 2^(1/2^i)
inline double beta_ladder(int i) { return std::exp2(std::ldexp(1.0, -i)); }

enum class BetaClassKind { below_sqrt2, at_epsilon, between, beyond_ladder, doubling };

inline const char* to_string(BetaClassKind k)
{
    switch (k) {
    case BetaClassKind::below_sqrt2: return "below_sqrt2";
    case BetaClassKind::at_epsilon: return "at_epsilon";
    case BetaClassKind::between: return "between";
    case BetaClassKind::beyond_ladder: return "beyond_ladder";
    default: return "doubling";
    }
}

struct BetaClass {
    BetaClassKind kind = BetaClassKind::below_sqrt2;
    int index = 0; // i for "at eps_i" and "(eps_i, eps_{i+1})"
    double eps_lo = std::nan("");
    double eps_hi = std::nan("");
    std::string certificate;
    bool certified = false;
    KneadingInvariant knead;
};

inline constexpr int default_ladder_size = 30;

inline BetaClass classify_beta(double beta, double at_tol = 1e-12, int imax = default_ladder_size)
{
    if (!(beta > 1 && beta <= 2))
        throw PreconditionError("beta must lie in (1,2]");
    BetaClass out;
    out.knead = kneading(symmetric_beta(beta), 64);
    const auto& kp = out.knead.plus_prefix;

    if (beta >= 2 - at_tol) {
        out.kind = BetaClassKind::doubling;
        out.eps_lo = 2;
        out.certified = out.knead.eta_plus && *out.knead.eta_plus == SymbolStream("1", "0");
        out.certificate = "eta+ = " + (out.knead.eta_plus ? out.knead.eta_plus->text() : kp);
        return out;
    }

    auto ladder = epsilon_ladder(imax);
    for (int i = 1; i <= imax; ++i) {
        double e = ladder[i - 1];
        if (std::abs(beta - e) <= at_tol) {
            out.kind = BetaClassKind::at_epsilon;
            out.index = i;
            out.eps_lo = out.eps_hi = e;
            if (i >= 2) {
                out.certified = out.knead.eta_plus && out.knead.eta_minus && *out.knead.eta_plus == one_zeros(i) &&
                                *out.knead.eta_minus == zero_ones(i);
                out.certificate = "kneading = (" + one_zeros(i).text() + ", " + zero_ones(i).text() + ")";
            } else {
                out.certified = out.knead.eta_plus && *out.knead.eta_plus == SymbolStream("10", "01");
                out.certificate = "kneading = (10|01, 01|10)";
            }
            return out;
        }
        if (beta < e) {
            if (i == 1) {
                out.kind = BetaClassKind::below_sqrt2;
                out.eps_hi = e;
                out.certificate = "beta < sqrt(2)";
                out.certified = true;
                return out;
            }
            out.kind = BetaClassKind::between;
            out.index = i - 1;
            out.eps_lo = ladder[i - 2];
            out.eps_hi = e;
            // (1 0^{i})^inf < eta+ < (1 0^{i-1})^inf, decided on the 64-symbol prefix
            auto lower = one_zeros(i).prefix(kp.size());
            auto upper = one_zeros(i - 1).prefix(kp.size());
            out.certified = compare_prefix(lower, kp) < 0 && compare_prefix(kp, upper) < 0;
            out.certificate = one_zeros(i).text() + " < eta+ < " + one_zeros(i - 1).text();
            return out;
        }
    }
    out.kind = BetaClassKind::beyond_ladder;
    out.index = imax;
    out.eps_lo = ladder.back();
    out.eps_hi = 2;
    out.certificate = "beta above eps_" + std::to_string(imax);
    return out;
}

inline std::string upper_kneading_prefix(double beta, std::size_t n)
{
    return one_sided_kneading(symmetric_beta(beta), critical_plus(symmetric_beta(beta)), n).prefix;
}

struct BetaFit {
    double beta = std::nan("");
    double lo = std::nan(""); // smallest beta whose prefix is <= target
    double hi = std::nan(""); // largest beta whose prefix is >= target
    std::size_t match_len = 0;
    bool realizable = false;
};

// Bisection on the monotone map beta -> eta+(beta). The target prefix is
// compared over min(prefix_len, |target|) symbols and extended up to 64 while
// the matching bracket is still wider than the bisection width.
inline BetaFit beta_from_kneading(const std::string& target, std::size_t prefix_len)
{
    if (target.empty() || target[0] != '1')
        throw PreconditionError("target kneading must begin with 1");
    if (!is_binary(target))
        throw PreconditionError("target must be binary");
    if (prefix_len < 1 || prefix_len > 64)
        throw PreconditionError("prefix_len must lie in [1,64]");

    const double floor_beta = 1 + 1e-12;
    const std::size_t max_len = std::min<std::size_t>(64, target.size());
    std::size_t len = std::min(prefix_len, max_len);

    auto g = [&](double beta) {
        auto p = upper_kneading_prefix(beta, len);
        auto c = compare_prefix(p, std::string_view(target).substr(0, len));
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    };

    BetaFit fit;
    for (;;) {
        // inf { beta : g <= 0 }
        double a = floor_beta, b = 2.0;
        if (g(a) <= 0)
            b = a;
        else
            for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
                double mid = 0.5 * (a + b);
                (g(mid) <= 0 ? b : a) = mid;
            }
        fit.lo = b;
        // sup { beta : g >= 0 }
        a = floor_beta, b = 2.0;
        if (g(b) >= 0)
            a = b;
        else if (g(a) < 0)
            a = std::nan("");
        else
            for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
                double mid = 0.5 * (a + b);
                (g(mid) >= 0 ? a : b) = mid;
            }
        fit.hi = a;

        bool matched = !std::isnan(fit.hi) && fit.lo <= fit.hi + 1e-12;
        if (matched && fit.hi - fit.lo > 1e-10 && len < max_len) {
            len = max_len;
            continue;
        }
        fit.realizable = matched;
        // Unmatched targets land on the jump of eta+, where lo and hi meet.
        fit.beta = std::isnan(fit.hi) ? floor_beta : std::min(0.5 * (fit.lo + fit.hi), 2.0);
        fit.match_len = common_prefix_length(upper_kneading_prefix(fit.beta, len), target.substr(0, len));
        return fit;
    }
}

inline BetaFit beta_from_kneading(const SymbolStream& target, std::size_t prefix_len)
{
    return beta_from_kneading(target.prefix(64), prefix_len);
}

enum class Membership { member, non_member, undetermined };

// Membership of an exact stream in the subshift of a kneading invariant
// known exactly or only through finite prefixes.
inline Membership member_of_subshift(const SymbolStream& xi, const KneadingInvariant& k)
{
    if (k.certified_periodic)
        return member_of_subshift(xi, *k.eta_plus, *k.eta_minus) ? Membership::member : Membership::non_member;
    const std::string lo = k.plus_prefix.substr(1);
    const std::string hi = k.minus_prefix.substr(1);
    bool undecided = false;
    for (std::size_t n = 0; n < distinct_tails(xi); ++n) {
        auto t = shift(xi, n).prefix(lo.size());
        auto a = compare_prefix(lo, t);
        auto b = compare_prefix(t, hi);
        if (a > 0 || b > 0)
            return Membership::non_member;
        if (a == 0 || b == 0)
            undecided = true;
    }
    return undecided ? Membership::undetermined : Membership::member;
}

struct InclusionReport {
    std::size_t lower_pass = 0, lower_total = 0, lower_undetermined = 0;
    std::size_t upper_pass = 0, upper_total = 0;
};

inline SymbolStream random_stream(std::mt19937_64& rng, std::size_t max_pre = 4, std::size_t max_per = 8)
{
    std::uniform_int_distribution<std::size_t> pre_len(0, max_pre), per_len(1, max_per);
    std::bernoulli_distribution bit(0.5);
    std::string pre, per;
    for (std::size_t k = pre_len(rng); k > 0; --k)
        pre.push_back(bit(rng) ? '1' : '0');
    for (std::size_t k = per_len(rng); k > 0; --k)
        per.push_back(bit(rng) ? '1' : '0');
    return {pre, per};
}

// Samples streams of the eps_i subshift and checks them in Sigma_{F_beta};
// samples periodic itineraries of F_beta and checks them in the eps_{i+1}
// subshift.
inline InclusionReport subshift_inclusion_certificate(double beta, int i, std::size_t samples,
                                                      std::uint64_t seed = 1)
{
    if (i < 1)
        throw PreconditionError("ladder index must be >= 1");
    const double lo = epsilon(i), hi = epsilon(i + 1);
    if (!(beta > lo + 1e-12 && beta < hi - 1e-12))
        throw PreconditionError("beta must lie strictly inside (eps_i, eps_{i+1})");

    auto k_lo = kneading(symmetric_beta(lo), 64);
    auto k_hi = kneading(symmetric_beta(hi), 64);
    auto k_beta = kneading(symmetric_beta(beta), 64);
    if (!k_lo.certified_periodic || !k_hi.certified_periodic)
        throw NumericalError("ladder kneading not certified periodic");

    std::mt19937_64 rng(seed);
    InclusionReport rep;
    for (std::size_t attempts = 0; rep.lower_total < samples && attempts < 1000000; ++attempts) {
        auto xi = random_stream(rng);
        if (!member_of_subshift(xi, *k_lo.eta_plus, *k_lo.eta_minus))
            continue;
        ++rep.lower_total;
        switch (member_of_subshift(xi, k_beta)) {
        case Membership::member: ++rep.lower_pass; break;
        case Membership::undetermined: ++rep.lower_undetermined; break;
        default: break;
        }
    }

    auto orbits = periodic_orbits(symmetric_beta(beta), 12);
    if (!orbits.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, orbits.size() - 1);
        for (std::size_t s = 0; s < samples; ++s) {
            const auto& o = orbits[pick(rng)];
            auto xi = shift(SymbolStream::periodic(o.word.str()), s % o.period());
            ++rep.upper_total;
            if (member_of_subshift(xi, *k_hi.eta_plus, *k_hi.eta_minus))
                ++rep.upper_pass;
        }
    }
    return rep;
}

struct OnsetBracket {
    double lo = std::nan(""); // rejected
    double hi = std::nan(""); // accepted
    bool found = false;
    bool collision_seen = false; // a critical-collision was met inside the bracket
};

// Follows the periodic orbit with itinerary w^inf through the symmetric family
// while beta decreases from `from` to `to`, then bisects the first rejection.
inline OnsetBracket rejection_onset(const Word& w, double from, double to, double step = 1e-3, double width = 1e-10)
{
    if (!(from > to && to > 1 && from <= 2 && step > 0))
        throw PreconditionError("need 2 >= from > to > 1 and step > 0");
    auto status = [&](double b) { return point_from_itinerary(symmetric_beta(b), w).rejection; };
    OnsetBracket out;
    if (status(from) != Rejection::none)
        return out;
    double hi = from, lo = from;
    for (;;) {
        lo = std::max(to, hi - step);
        auto r = status(lo);
        if (r == Rejection::critical_collision)
            out.collision_seen = true;
        if (r != Rejection::none)
            break;
        if (lo == to)
            return out;
        hi = lo;
    }
    while (hi - lo > width) {
        double mid = 0.5 * (lo + hi);
        auto r = status(mid);
        if (r == Rejection::critical_collision)
            out.collision_seen = true;
        (r == Rejection::none ? hi : lo) = mid;
    }
    // probe the band just below the accepted end
    for (double d : {1e-11, 1e-10, 3e-10}) {
        if (status(hi - d) == Rejection::critical_collision)
            out.collision_seen = true;
    }
    out.lo = lo;
    out.hi = hi;
    out.found = true;
    return out;
}

} // namespace lorenz1d
