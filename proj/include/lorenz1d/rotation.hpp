#pragma once

#include "maps.hpp"

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>

namespace lorenz1d {

enum class RotationKind { exact_periodic, estimated };

struct RotationDatum {
    double value = std::nan("");
    long num = 0, den = 0; // exact value num/den when periodic
    RotationKind kind = RotationKind::estimated;
    std::optional<Word> witness;
};

inline RotationDatum rotation_of_word(const Word& w)
{
    long ones = std::count(w.str().begin(), w.str().end(), '1');
    long n = long(w.size());
    long g = std::gcd(ones, n);
    RotationDatum d;
    d.num = ones / g;
    d.den = n / g;
    d.value = double(ones) / double(n);
    d.kind = RotationKind::exact_periodic;
    d.witness = w;
    return d;
}

// R_n(x)/n, with R_n counting iterates >= c; switches to the exact value
// when the orbit of x closes up within the recurrence tolerance.
inline RotationDatum rotation_number(const PiecewiseAffineMap& m, SidedPoint p, std::size_t n)
{
    if (n < 1)
        throw PreconditionError("rotation_number needs n >= 1");
    const double x0 = p.x;
    std::string word;
    long hits = 0;
    for (std::size_t k = 0; k < n; ++k) {
        int s = symbol_of(m, p);
        hits += s;
        if (word.size() < 64)
            word.push_back(char('0' + s));
        p = eval(m, p);
        if (k < 64 && std::abs(p.x - x0) < recurrence_tolerance)
            return rotation_of_word(Word(word));
    }
    RotationDatum d;
    d.value = double(hits) / double(n);
    return d;
}

inline RotationDatum rotation_number(const PiecewiseAffineMap& m, double x, std::size_t n)
{
    return rotation_number(m, SidedPoint{x, x >= m.critical() ? Side::plus : Side::minus}, n);
}

struct RotationInterval {
    double a = 1, b = 0;
    std::vector<RotationDatum> witnesses; // exact periodic orbits attaining a and b, when any
};

// Inner estimate of Rot(F): sampled points, both critical orbits, and every
// periodic orbit up to witness_period (exact values).
inline RotationInterval rotation_interval_estimate(const PiecewiseAffineMap& m, std::size_t n_samples = 256,
                                                   std::size_t n_iters = 10000, std::uint64_t seed = 7,
                                                   std::size_t witness_period = 8)
{
    if (!(m.at_zero() < m.at_one()))
        throw PreconditionError("rotation interval needs an overlapping map, F(0) < F(1)");
    RotationInterval out;
    auto take = [&](double v) {
        out.a = std::min(out.a, v);
        out.b = std::max(out.b, v);
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t s = 0; s < n_samples; ++s)
        take(rotation_number(m, unif(rng), n_iters).value);
    take(rotation_number(m, critical_plus(m), n_iters).value);
    take(rotation_number(m, critical_minus(m), n_iters).value);

    std::optional<RotationDatum> lo, hi;
    for (const auto& o : periodic_orbits(m, witness_period)) {
        auto d = rotation_of_word(o.word);
        if (!lo || d.value < lo->value)
            lo = d;
        if (!hi || d.value > hi->value)
            hi = d;
    }
    for (auto* d : {&lo, &hi}) {
        if (!*d)
            continue;
        take((*d)->value);
        out.witnesses.push_back(**d);
    }
    return out;
}

// A_s = 0^s 1
inline Word block_A(std::size_t s) { return Word(std::string(s, '0') + "1"); }

inline OrbitSearch concat_orbit(const PiecewiseAffineMap& m, const std::vector<Word>& blocks, bool mirrored = false)
{
    if (blocks.empty())
        throw PreconditionError("concat_orbit needs at least one block");
    std::size_t smin = SIZE_MAX, smax = 0;
    std::string c;
    for (const auto& b : blocks) {
        const auto& s = b.str();
        std::size_t zeros = s.size() - 1;
        if (s != block_A(zeros).str())
            throw PreconditionError("blocks must have the form 0^s 1");
        smin = std::min(smin, zeros);
        smax = std::max(smax, zeros);
        c += s;
    }
    if (smax - smin > 1 || smax < 2)
        throw PreconditionError("blocks must come from {A_s, A_{s-1}} with s >= 2");
    return point_from_itinerary(m, Word(mirrored ? flip(c) : c));
}

// Whether the periodic word w is, up to rotation, a concatenation of 01/10
// blocks (odd lengths are tested on ww).
inline bool has_21_form(const std::string& w)
{
    std::string ww = w.size() % 2 ? w + w : w;
    for (std::size_t r = 0; r < ww.size(); ++r) {
        std::string t = rotate_left(ww, r);
        bool ok = true;
        for (std::size_t j = 0; j + 1 < t.size() && ok; j += 2)
            ok = t[j] != t[j + 1];
        if (ok)
            return true;
    }
    return false;
}

struct ItineraryFormReport {
    bool in_precondition = true;
    std::size_t checked = 0;
    std::vector<std::string> violations;
};

inline ItineraryFormReport verify_21_itinerary_form(const ExpandingLorenzMap& m, std::size_t max_period)
{
    ItineraryFormReport rep;
    rep.in_precondition = m.kind() == MapKind::symmetric_beta && m.beta() <= std::sqrt(2.0) + 1e-12;
    for (const auto& o : periodic_orbits(m, max_period)) {
        ++rep.checked;
        if (!has_21_form(o.word.str()))
            rep.violations.push_back(o.word.str());
    }
    return rep;
}

} // namespace lorenz1d
