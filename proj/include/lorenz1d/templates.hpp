#pragma once

#include "maps.hpp"

#include <cstdint>
#include <numeric>

namespace lorenz1d {

struct TemplateSpec {
    int m = 0, n = 0; // half twists on the two strips
};

struct TwistBlock {
    int first = 1, last = 1; // strand positions, 1-based, inclusive
    int full_twists = 0;     // signed
};

struct BraidWord {
    int strands = 0;
    std::vector<int> generators;   // signed, 1-based: +i is sigma_i
    std::vector<TwistBlock> twists; // applied before the generators

    bool positive() const
    {
        return std::all_of(generators.begin(), generators.end(), [](int g) { return g > 0; }) &&
               std::all_of(twists.begin(), twists.end(), [](const TwistBlock& t) { return t.full_twists >= 0; });
    }

    std::vector<int> expanded() const
    {
        std::vector<int> out;
        for (const auto& t : twists) {
            int k = t.last - t.first + 1;
            int sign = t.full_twists > 0 ? 1 : -1;
            for (int rep = 0; rep < std::abs(t.full_twists) * k; ++rep)
                for (int g = t.first; g < t.last; ++g)
                    out.push_back(sign * g);
        }
        out.insert(out.end(), generators.begin(), generators.end());
        return out;
    }

    // Permutation induced by the generators alone: strand starting at
    // position p ends at perm[p] (0-based).
    std::vector<int> permutation() const
    {
        std::vector<int> at(strands); // at[pos] = strand currently there
        std::iota(at.begin(), at.end(), 0);
        for (int g : generators)
            std::swap(at[std::abs(g) - 1], at[std::abs(g)]);
        std::vector<int> perm(strands);
        for (int pos = 0; pos < strands; ++pos)
            perm[at[pos]] = pos;
        return perm;
    }

    std::string text() const
    {
        std::string s;
        for (const auto& t : twists)
            s += "D" + std::to_string(t.first) + "-" + std::to_string(t.last) + "^" + std::to_string(t.full_twists) + " ";
        for (int g : generators)
            s += (g > 0 ? "s" : "S") + std::to_string(std::abs(g)) + " ";
        if (!s.empty())
            s.pop_back();
        return s;
    }
};

inline std::vector<Word> enumerate_lorenz_words(std::size_t period)
{
    if (period < 1 || period > 16)
        throw PreconditionError("period must lie in [1,16]");
    std::vector<Word> out;
    for (auto& w : lyndon_words(period))
        out.emplace_back(w);
    return out;
}

inline int trip_number(const Word& w)
{
    const auto& s = w.str();
    if (!is_primitive(s))
        throw PreconditionError("trip number needs a primitive word");
    if (s.find('0') == std::string::npos)
        return 1;
    int blocks = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        blocks += s[i] == '1' && s[(i + s.size() - 1) % s.size()] == '0';
    return blocks;
}

// Numerators of the doubling-map orbit points k/(2^n - 1) for the rotations
// of w, in rotation order.
inline std::vector<std::uint64_t> doubling_numerators(const Word& w)
{
    const std::size_t n = w.size();
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t v = 0;
        for (std::size_t j = 0; j < n; ++j)
            v = (v << 1) | std::uint64_t(w[(i + j) % n]);
        out.push_back(v);
    }
    return out;
}

inline BraidWord lorenz_braid(const Word& w, TemplateSpec spec = {})
{
    if (spec.m != spec.n || spec.m % 2 != 0)
        throw PreconditionError("only L(k,k) templates with k even are supported");
    if (!is_primitive(w.str()))
        throw PreconditionError("braid needs a primitive word");
    if (w.size() > 62)
        throw PreconditionError("word too long for exact orbit points");
    const int n = int(w.size());
    auto num = doubling_numerators(w);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return num[a] < num[b]; });
    std::vector<int> rank(n);
    for (int p = 0; p < n; ++p)
        rank[order[p]] = p;

    // target[p]: branch-line position reached by the strand starting at p
    std::vector<int> target(n);
    for (int i = 0; i < n; ++i)
        target[rank[i]] = rank[(i + 1) % n];

    BraidWord bw;
    bw.strands = n;
    for (int pass = 0; pass < n; ++pass)
        for (int p = 0; p + 1 < n; ++p)
            if (target[p] > target[p + 1]) {
                std::swap(target[p], target[p + 1]);
                bw.generators.push_back(p + 1);
            }

    if (spec.m != 0) {
        int zeros = int(std::count(w.str().begin(), w.str().end(), '0'));
        if (zeros > 0)
            bw.twists.push_back({1, zeros, spec.m / 2});
        if (zeros < n)
            bw.twists.push_back({zeros + 1, n, spec.m / 2});
    }
    return bw;
}

} // namespace lorenz1d
