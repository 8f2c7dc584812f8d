#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace lorenz1d {

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_binary(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), [](char ch) { return ch == '0' || ch == '1'; });
}

// Nonempty finite word over {0,1}, stored as '0'/'1' characters.
class Word {
public:
    Word() = default;
    explicit Word(std::string s) : s_(std::move(s))
    {
        if (s_.empty() || !is_binary(s_))
            throw PreconditionError("word must be a nonempty string over {0,1}: '" + s_ + "'");
    }

    const std::string& str() const { return s_; }
    std::size_t size() const { return s_.size(); }
    int operator[](std::size_t i) const { return s_[i] - '0'; }

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word& a, const Word& b) { return a.s_ <=> b.s_; }

private:
    std::string s_;
};

inline std::string flip(std::string_view s)
{
    std::string out(s);
    for (auto& ch : out)
        ch = ch == '0' ? '1' : '0';
    return out;
}

inline std::string rotate_left(std::string_view s, std::size_t k)
{
    if (s.empty())
        return {};
    k %= s.size();
    return std::string(s.substr(k)) + std::string(s.substr(0, k));
}

// Smallest root p of s with s = p^m.
inline std::string primitive_root(std::string_view s)
{
    const std::size_t n = s.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d)
            continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i)
            ok = s[i] == s[i - d];
        if (ok)
            return std::string(s.substr(0, d));
    }
    return std::string(s);
}

inline bool is_primitive(std::string_view s) { return primitive_root(s).size() == s.size(); }

// Eventually periodic one-sided sequence pre (per)^inf, kept canonical:
// primitive period and shortest preperiod.
class SymbolStream {
public:
    SymbolStream() : per_("0") {}
    SymbolStream(std::string pre, std::string per) : pre_(std::move(pre)), per_(std::move(per))
    {
        if (per_.empty())
            throw PreconditionError("stream period must be nonempty");
        if (!is_binary(pre_) || !is_binary(per_))
            throw PreconditionError("stream symbols must be 0 or 1");
        canonicalize();
    }

    static SymbolStream periodic(std::string per) { return {"", std::move(per)}; }

    // Text form `pre|per`.
    static SymbolStream parse(std::string_view text)
    {
        auto bar = text.find('|');
        if (bar == std::string_view::npos)
            throw PreconditionError("stream text must have the form pre|per");
        return {std::string(text.substr(0, bar)), std::string(text.substr(bar + 1))};
    }

    const std::string& pre() const { return pre_; }
    const std::string& per() const { return per_; }

    int at(std::size_t k) const
    {
        if (k < pre_.size())
            return pre_[k] - '0';
        return per_[(k - pre_.size()) % per_.size()] - '0';
    }

    std::string prefix(std::size_t n) const
    {
        std::string out;
        out.reserve(n);
        for (std::size_t k = 0; k < n; ++k)
            out.push_back(char('0' + at(k)));
        return out;
    }

    std::string text() const { return pre_ + "|" + per_; }

    friend bool operator==(const SymbolStream&, const SymbolStream&) = default;

private:
    void canonicalize()
    {
        per_ = primitive_root(per_);
        while (!pre_.empty() && pre_.back() == per_.back()) {
            per_ = per_.back() + per_.substr(0, per_.size() - 1);
            pre_.pop_back();
        }
    }

    std::string pre_;
    std::string per_;
};

inline std::size_t comparison_horizon(const SymbolStream& a, const SymbolStream& b)
{
    return a.pre().size() + b.pre().size() + std::lcm(a.per().size(), b.per().size()) + 1;
}

inline std::strong_ordering lex_compare(const SymbolStream& a, const SymbolStream& b)
{
    const std::size_t h = comparison_horizon(a, b);
    for (std::size_t k = 0; k < h; ++k) {
        int x = a.at(k), y = b.at(k);
        if (x != y)
            return x < y ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

inline SymbolStream shift(const SymbolStream& s, std::size_t n)
{
    if (n <= s.pre().size())
        return {s.pre().substr(n), s.per()};
    return SymbolStream::periodic(rotate_left(s.per(), (n - s.pre().size()) % s.per().size()));
}

inline SymbolStream mirror(const SymbolStream& s) { return {flip(s.pre()), flip(s.per())}; }

// Number of shifts n >= 0 needed to visit every distinct tail of s.
inline std::size_t distinct_tails(const SymbolStream& s) { return s.pre().size() + s.per().size(); }

inline bool is_admissible_pair(const SymbolStream& etaP, const SymbolStream& etaM)
{
    const SymbolStream lo = shift(etaP, 1);
    const SymbolStream hi = shift(etaM, 1);
    for (std::size_t n = 1; n <= distinct_tails(etaP); ++n) {
        auto t = shift(etaP, n);
        if (lex_compare(lo, t) > 0 || lex_compare(t, hi) >= 0)
            return false;
    }
    for (std::size_t n = 1; n <= distinct_tails(etaM); ++n) {
        auto t = shift(etaM, n);
        if (lex_compare(lo, t) >= 0 || lex_compare(t, hi) > 0)
            return false;
    }
    return true;
}

inline bool member_of_subshift(const SymbolStream& xi, const SymbolStream& etaP, const SymbolStream& etaM)
{
    const SymbolStream lo = shift(etaP, 1);
    const SymbolStream hi = shift(etaM, 1);
    for (std::size_t n = 0; n < distinct_tails(xi); ++n) {
        auto t = shift(xi, n);
        if (lex_compare(lo, t) > 0 || lex_compare(t, hi) > 0)
            return false;
    }
    return true;
}

// Comparison of a stream against a finite prefix; `equal` means the prefix
// did not decide.
inline std::strong_ordering compare_prefix(std::string_view a, std::string_view b)
{
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k)
        if (a[k] != b[k])
            return a[k] < b[k] ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

inline std::size_t common_prefix_length(std::string_view a, std::string_view b)
{
    std::size_t n = 0;
    while (n < a.size() && n < b.size() && a[n] == b[n])
        ++n;
    return n;
}

inline std::string repeat(std::string_view w, std::size_t times)
{
    std::string out;
    for (std::size_t i = 0; i < times; ++i)
        out += w;
    return out;
}

// (1 0^i)^inf and its mirror (0 1^i)^inf.
inline SymbolStream one_zeros(std::size_t i) { return SymbolStream::periodic("1" + std::string(i, '0')); }
inline SymbolStream zero_ones(std::size_t i) { return SymbolStream::periodic("0" + std::string(i, '1')); }

} // namespace lorenz1d
