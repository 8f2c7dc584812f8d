#pragma once

#include "maps.hpp"

#include <array>
#include <functional>
#include <set>

namespace lorenz1d {

// Truncated series K sum_{n<N} beta^-n (1_[0,a_n] - 1_[0,b_n]) with
// a_n = F^n(1-), b_n = F^n(0+). The piecewise-constant function is kept
// exactly; `values` samples it at the cell centres of an M-cell grid.
struct DensityApprox {
    double beta = 0;
    std::vector<double> a, b, w;
    double K = 1;
    std::size_t terms = 0;
    std::vector<double> grid, values;
    double truncation_bound = 0;

    double operator()(double x) const
    {
        double s = 0;
        for (std::size_t n = 0; n < terms; ++n)
            s += w[n] * ((x <= a[n]) - (x <= b[n]));
        return K * s;
    }

    // Exact mass of [lo,hi].
    double mass(double lo, double hi) const
    {
        auto overlap = [&](double e) { return std::clamp(e, lo, hi) - lo; };
        double s = 0;
        for (std::size_t n = 0; n < terms; ++n)
            s += w[n] * (overlap(a[n]) - overlap(b[n]));
        return K * s;
    }

    double integral() const { return mass(0, 1); }

    double grid_integral() const
    {
        double s = 0;
        for (double v : values)
            s += v;
        return s / double(values.size());
    }

    std::vector<double> breakpoints() const
    {
        std::set<double> pts{0.0, 1.0};
        for (std::size_t n = 0; n < terms; ++n) {
            pts.insert(std::clamp(a[n], 0.0, 1.0));
            pts.insert(std::clamp(b[n], 0.0, 1.0));
        }
        return {pts.begin(), pts.end()};
    }
};

inline DensityApprox density(const ExpandingLorenzMap& m, std::size_t N = 40, std::size_t M = 4096)
{
    if (m.kind() != MapKind::symmetric_beta)
        throw PreconditionError("density is implemented for the symmetric family");
    if (N < 8 || M < 256)
        throw PreconditionError("density needs N >= 8 and M >= 256");
    DensityApprox d;
    d.beta = m.beta();
    d.terms = N;
    SidedPoint one{1.0, Side::minus}, zero{0.0, Side::plus};
    double wn = 1;
    for (std::size_t n = 0; n < N; ++n) {
        d.a.push_back(one.x);
        d.b.push_back(zero.x);
        d.w.push_back(wn);
        one = eval(m, one);
        zero = eval(m, zero);
        wn /= d.beta;
    }
    d.truncation_bound = std::pow(d.beta, -double(N)) / (1 - 1 / d.beta);
    d.K = 1;
    d.K = 1 / d.mass(0, 1);
    d.grid.resize(M);
    d.values.resize(M);
    for (std::size_t j = 0; j < M; ++j) {
        d.grid[j] = (double(j) + 0.5) / double(M);
        d.values[j] = d(d.grid[j]);
    }
    return d;
}

// 5-point Gauss-Legendre on [lo,hi].
inline double gauss5(const std::function<double(double)>& f, double lo, double hi)
{
    static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                             0.9061798459386640};
    static constexpr std::array<double, 5> wt{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                              0.2369268850561891, 0.2369268850561891};
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo), s = 0;
    for (int i = 0; i < 5; ++i)
        s += wt[i] * f(mid + half * x[i]);
    return s * half;
}

// |int f o F dmu - int f dmu| for each f; the density is constant and F is
// affine between consecutive breakpoints, so each piece is integrated by
// Gauss-Legendre.
inline std::vector<double> invariance_residual(const PiecewiseAffineMap& m, const DensityApprox& d,
                                               const std::vector<std::function<double(double)>>& fns)
{
    auto bp = d.breakpoints();
    bp.push_back(m.critical());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<double> out;
    for (const auto& f : fns) {
        double pushed = 0, plain = 0;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
            double lo = bp[i], hi = bp[i + 1];
            if (hi - lo <= 0)
                continue;
            double h = d(0.5 * (lo + hi));
            if (h == 0)
                continue;
            const auto& br = m.branch(0.5 * (lo + hi) > m.critical() ? 1 : 0);
            pushed += h * gauss5([&](double x) { return f(br(x)); }, lo, hi);
            plain += h * gauss5(f, lo, hi);
        }
        out.push_back(std::abs(pushed - plain));
    }
    return out;
}

inline double entropy(double beta)
{
    if (!(beta > 1 && beta <= 2))
        throw PreconditionError("beta must lie in (1,2]");
    return std::log(beta);
}

// (1/n) ln #{w in {0,1}^n : w^inf is realized by a periodic point}.
inline double entropy_word_count(const PiecewiseAffineMap& m, std::size_t n)
{
    if (n < 1 || n > 24)
        throw PreconditionError("word length must lie in [1,24]");
    std::size_t count = 0;
    std::string w(n, '0');
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << n); ++bits) {
        for (std::size_t j = 0; j < n; ++j)
            w[j] = (bits >> j) & 1 ? '1' : '0';
        if (point_from_itinerary(m, Word(w)).ok())
            ++count;
    }
    return count ? std::log(double(count)) / double(n) : 0.0;
}

struct Interval {
    double lo, hi;
};

// Maximal runs of grid cells with density above threshold; gaps of a single
// cell are bridged.
inline std::vector<Interval> support_intervals(const DensityApprox& d, double threshold)
{
    if (!(threshold > 0))
        throw PreconditionError("threshold must be positive");
    const std::size_t M = d.values.size();
    const double cell = 1.0 / double(M);
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t j = 0; j < M;) {
        if (d.values[j] <= threshold) {
            ++j;
            continue;
        }
        std::size_t k = j;
        while (k + 1 < M && d.values[k + 1] > threshold)
            ++k;
        if (!runs.empty() && j <= runs.back().second + 2)
            runs.back().second = k;
        else
            runs.emplace_back(j, k);
        j = k + 1;
    }
    std::vector<Interval> out;
    for (auto [j, k] : runs)
        out.push_back({double(j) * cell, double(k + 1) * cell});
    return out;
}

} // namespace lorenz1d
