// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "lorenz1d/lorenz1d.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace lorenz1d;

namespace {

struct Check {
    std::vector<std::string> failures;
    std::ostringstream info;

    void require(bool ok, const std::string& what)
    {
        if (!ok)
            failures.push_back(what);
    }
};

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void ladder(Check& c)
{
    const double printed[] = {1.61803, 1.83929, 1.92756, 1.96595, 1.98358};
    double worst_q = 0, worst_d = 0;
    for (int i = 2; i <= 6; ++i) {
        double e = epsilon(i);
        worst_d = std::max(worst_d, std::abs(e - printed[i - 2]));
        worst_q = std::max(worst_q, std::abs(q_poly(i, e)));
        c.require(std::abs(e - printed[i - 2]) < 1e-4, "eps_" + std::to_string(i) + " = " + num(e));
        c.require(std::abs(q_poly(i, e)) < 1e-12, "Q_" + std::to_string(i) + " residual");
    }
    c.info << "max|eps-printed|=" << num(worst_d) << " max|Q|=" << num(worst_q);
}

void kneading_goldens(Check& c)
{
    const std::size_t n = 64;
    auto expect = [&](double beta, const SymbolStream& plus, const SymbolStream& minus, const std::string& name) {
        auto k = kneading(symmetric_beta(beta), n);
        c.require(k.plus_prefix == plus.prefix(n), name + " eta+ = " + k.plus_prefix.substr(0, 16) + "...");
        c.require(k.minus_prefix == minus.prefix(n), name + " eta- = " + k.minus_prefix.substr(0, 16) + "...");
    };
    expect(2.0, SymbolStream("1", "0"), SymbolStream("0", "1"), "F_2");
    expect(std::sqrt(2.0), SymbolStream("10", "01"), SymbolStream("01", "10"), "F_sqrt2");
    expect(beta_ladder(2), SymbolStream("1001", "0110"), SymbolStream("0110", "1001"), "F_beta2");
    for (int i = 2; i <= 6; ++i)
        expect(epsilon(i), one_zeros(i), zero_ones(i), "F_eps" + std::to_string(i));
    c.info << "9 maps x 64 symbols";
}

void renormalization(Check& c)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ub(1.05, std::sqrt(2.0));
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
        double b = ub(rng);
        auto g = renormalize(symmetric_beta(b), 2, 2);
        if (g.status != RenormStatus::analytic) {
            c.require(false, "no analytic renormalization at " + num(b));
            continue;
        }
        worst = std::max(worst, max_grid_deviation(*g.child, symmetric_beta(b * b), 1000));
    }
    c.require(worst < 1e-11, "grid deviation " + num(worst));
    std::string depths;
    for (int i = 1; i <= 5; ++i) {
        int d = int(renorm_tower(beta_ladder(i)).size());
        depths += std::to_string(d);
        c.require(d == i, "tower depth at beta_" + std::to_string(i) + " is " + std::to_string(d));
    }
    c.info << "max deviation=" << num(worst) << " depths=" << depths;
}

void period_sets(Check& c)
{
    const std::set<std::size_t> even{2, 4, 6, 8, 10, 12}, b2{2, 4, 8, 12};
    c.require(period_set(symmetric_beta(std::sqrt(2.0)), 12) == even, "sqrt2 period set");
    c.require(period_set(symmetric_beta(beta_ladder(2)), 12) == b2, "beta_2 period set");
    auto p17 = period_set(symmetric_beta(1.7), 12);
    for (std::size_t q = 2; q <= 12; ++q)
        c.require(p17.count(q) == 1, "beta 1.7 lacks period " + std::to_string(q));
    c.require(p17.count(1) == 0, "beta 1.7 has a fixed point");
    c.require(period_set(symmetric_beta(2.0), 4).count(1) == 1, "beta 2 lacks fixed points");
    std::mt19937_64 rng(2025);
    std::uniform_real_distribution<double> ub(1.05, std::sqrt(2.0));
    int consistent = 0;
    for (int t = 0; t < 10; ++t) {
        double b = ub(rng);
        auto pa = period_set_checked(symmetric_beta(b), 12);
        bool ok = pa.predicted.has_value() && pa.consistent;
        consistent += ok;
        c.require(ok, "period algebra at " + num(b));
    }
    c.info << "algebra consistent " << consistent << "/10";
}

void bifurcation_boundary(Check& c)
{
    auto o = rejection_onset(Word("100"), 1.9, 1.2);
    c.require(o.found, "no rejection found");
    c.require(o.collision_seen, "rejection is not a critical collision");
    double e = epsilon(2);
    c.require(o.lo <= e + 1e-6 && e - 1e-6 <= o.hi, "bracket misses eps_2");
    c.require(std::abs(o.lo - e) < 1e-6 && std::abs(o.hi - e) < 1e-6, "bracket wider than 1e-6 around eps_2");
    c.info << "bracket=[" << num(o.lo) << ", " << num(o.hi) << "] |hi-eps_2|=" << num(std::abs(o.hi - e));
}

void matching_map(Check& c)
{
    auto m = matching_example_map();
    auto mi = matching_index(m);
    int idx = mi.index ? *mi.index : -1;
    c.require(idx == 12, "matching_index = " + std::to_string(idx) + ", expected 12");
    c.require(mi.index && mi.residual < 1e-8, "matching residual " + num(mi.residual));
    auto k = kneading(m, 64);
    c.require(k.plus_prefix == SymbolStream::periodic("1000").prefix(64), "eta+ differs from (1000)^inf");
    c.require(k.minus_prefix == SymbolStream::periodic("010").prefix(64), "eta- differs from (010)^inf");
    auto rep = cut_and_paste_check(m, renormalize(m, 4, 3));
    c.require(rep.matching.has_value(), "cut-and-paste report does not flag matching");
    c.info << "beta=" << num(m.beta()) << " matching_index=" << idx << " residual=" << num(mi.residual)
           << " residual(12)=" << num(matching_residual(m, 12));
}

void nonsymmetric_region(Check& c)
{
    auto rc = region_curves(std::sqrt(2.0));
    c.require(std::abs(rc.L - std::sqrt(2.0)) < 1e-10 && std::abs(rc.U - std::sqrt(2.0)) < 1e-10,
              "L, U at sqrt2");
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> us(1.01, std::sqrt(2.0) - 1e-3), u01(0.0, 1.0);
    double worst = 0;
    int agree = 0;
    for (int t = 0; t < 10; ++t) {
        double s = us(rng);
        auto [L, U] = region_curves(s);
        double r = L + (U - L) * u01(rng);
        auto p = cycle_points(s, r);
        worst = std::max({worst, p.residual0, p.residual1});
        auto kh = kneading(two_slope_map(s, r), 48);
        auto cb = conjugate_beta_alpha(s, r, 48);
        auto kf = kneading(beta_transform(cb.beta, cb.alpha), 48);
        bool same = kh.plus_prefix == kf.plus_prefix && kh.minus_prefix == kf.minus_prefix;
        agree += same;
        c.require(same, "kneadings differ at (" + num(s) + ", " + num(r) + ")");
    }
    c.require(worst < 1e-11, "cycle residual " + num(worst));
    c.info << "max cycle residual=" << num(worst) << " kneading agreement " << agree << "/10";
}

// Birkhoff histogram; the small kick keeps the doubling orbit off 0.
std::vector<double> histogram(double beta, std::size_t iters, std::size_t bins)
{
    auto f = symmetric_beta(beta);
    std::mt19937_64 rng(2027);
    std::uniform_real_distribution<double> ux(0.0, 1.0), kick(-1e-12, 1e-12);
    double x = ux(rng);
    for (int k = 0; k < 1000; ++k)
        x = std::clamp(f(x) + kick(rng), 0.0, 1.0);
    std::vector<double> h(bins, 0.0);
    for (std::size_t k = 0; k < iters; ++k) {
        x = std::clamp(f(x) + kick(rng), 0.0, 1.0);
        h[std::min(bins - 1, std::size_t(x * double(bins)))] += 1.0 / double(iters);
    }
    return h;
}

void density_checks(Check& c)
{
    auto d2 = density(symmetric_beta(2.0));
    double dev = 0;
    for (double v : d2.values)
        dev = std::max(dev, std::abs(v - 1));
    c.require(dev < 1e-10, "beta 2 density deviates by " + num(dev));
    std::vector<std::function<double(double)>> fns = {[](double x) { return x; }, [](double x) { return x * x; }};
    double worst_norm = 0, worst_inv = 0, worst_l1 = 0;
    for (double b : {1.5, 1.8, 2.0}) {
        auto f = symmetric_beta(b);
        auto d = density(f);
        worst_norm = std::max(worst_norm, std::abs(d.integral() - 1));
        for (double r : invariance_residual(f, d, fns))
            worst_inv = std::max(worst_inv, r);
        const std::size_t bins = 512;
        auto h = histogram(b, 1000000, bins);
        double l1 = 0;
        for (std::size_t j = 0; j < bins; ++j)
            l1 += std::abs(h[j] - d.mass(double(j) / bins, double(j + 1) / bins));
        worst_l1 = std::max(worst_l1, l1);
    }
    c.require(worst_norm < 1e-6, "normalization " + num(worst_norm));
    c.require(worst_inv < 1e-4, "invariance residual " + num(worst_inv));
    c.require(worst_l1 < 0.05, "histogram L1 " + num(worst_l1));
    for (double b : {std::sqrt(2.0), 1.5, 1.8, 2.0}) {
        auto s = support_intervals(density(symmetric_beta(b)), 1e-3);
        c.require(s.size() == 1 && s[0].lo == 0.0 && s[0].hi == 1.0, "support at " + num(b) + " is not [0,1]");
    }
    c.info << "|norm-1|=" << num(worst_norm) << " invariance=" << num(worst_inv) << " L1=" << num(worst_l1);
}

void rotation_checks(Check& c)
{
    auto r17 = rotation_interval_estimate(symmetric_beta(1.7));
    c.require(r17.a <= 1.0 / 3 && r17.b >= 2.0 / 3, "beta 1.7 interval misses [1/3,2/3]");
    bool exact = r17.witnesses.size() == 2;
    for (const auto& w : r17.witnesses)
        exact = exact && w.kind == RotationKind::exact_periodic;
    c.require(exact, "beta 1.7 witnesses are not exact periodic orbits");
    auto r13 = rotation_interval_estimate(symmetric_beta(1.3));
    c.require(std::abs(r13.a - 0.5) < 2e-3 && std::abs(r13.b - 0.5) < 2e-3, "beta 1.3 interval not near 1/2");
    double worst = 0;
    for (double b : {1.6, 1.9})
        worst = std::max(worst, std::abs(entropy_word_count(symmetric_beta(b), 16) - std::log(b)));
    c.require(worst < 0.05, "entropy estimate off by " + num(worst));
    c.info << "rot(1.7)=[" << num(r17.a) << "," << num(r17.b) << "] rot(1.3)=[" << num(r13.a) << "," << num(r13.b)
           << "] entropy err=" << num(worst);
}

void flow_harness(Check& c)
{
    const LorenzParams p{10, 28, 8.0 / 3};
    double res = 0;
    for (const auto& q : nontrivial_fixed_points(p))
        res = std::max(res, norm(vector_field(p, q)));
    c.require(res < 1e-12, "fixed-point residual " + num(res));

    FlowOptions o;
    auto fp = nontrivial_fixed_points(p)[0];
    Vec3 seed{fp[0] + 1, fp[1] + 1, p.rho - 1};
    auto a = trace_crossings(p, seed, 40, o);
    auto b = trace_crossings(p, mirror_state(seed), 40, o);
    std::size_t mirrored = 0;
    while (mirrored < std::min(a.symbols.size(), b.symbols.size()) && a.symbols[mirrored] != b.symbols[mirrored])
        ++mirrored;
    c.require(mirrored >= 20, "mirrored seeds agree for " + std::to_string(mirrored) + " symbols");

    auto k = separatrix_kneading(p, 64, o);
    FlowOptions o10 = o;
    o10.delta = o.delta / 10;
    auto k10 = separatrix_kneading(p, 64, o10);
    bool stable = !k.omega0.empty() && k10.omega0.compare(0, k.omega0.size(), k.omega0) == 0;
    c.require(stable, "separatrix prefix changes under delta/10");
    c.require(k.fitted_beta > 1 && k.fitted_beta <= 2, "fitted beta " + num(k.fitted_beta));
    c.require(k.match_len >= 10, "match_len " + std::to_string(k.match_len));

    auto t = separatrix_kneading({10.2, 30.38, 8.0 / 3}, 64, o);
    c.require(t.k10 >= 5, "T-point k = " + std::to_string(t.k10));
    c.require(std::abs(t.fitted_beta - 2) < 0.15, "T-point fitted beta " + num(t.fitted_beta));
    c.info << "residual=" << num(res) << " mirrored=" << mirrored << " prefix=" << k.omega0.size()
           << " k10=" << k.k10 << " beta=" << num(k.fitted_beta) << " match=" << k.match_len << " | T-point k10=" << t.k10
           << " beta=" << num(t.fitted_beta);
}

long long primitive_necklaces(int n)
{
    auto mobius = [](int k) {
        int mu = 1;
        for (int p = 2; p * p <= k; ++p)
            if (k % p == 0) {
                k /= p;
                if (k % p == 0)
                    return 0;
                mu = -mu;
            }
        return k > 1 ? -mu : mu;
    };
    long long total = 0;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0)
            total += mobius(d) * (1LL << (n / d));
    return total / n;
}

void template_combinatorics(Check& c)
{
    std::size_t words = 0;
    for (int n = 1; n <= 12; ++n) {
        auto ws = enumerate_lorenz_words(n);
        words += ws.size();
        c.require((long long)ws.size() == primitive_necklaces(n), "word count at period " + std::to_string(n));
        if (n >= 2)
            for (const auto& w : ws)
                c.require(lorenz_braid(w).positive(), "braid of " + w.str() + " not positive");
    }
    for (std::size_t n = 2; n <= 8; ++n) {
        const std::uint64_t den = (std::uint64_t(1) << n) - 1;
        for (const auto& w : enumerate_lorenz_words(n)) {
            std::uint64_t v = 0;
            for (std::size_t j = 0; j < n; ++j)
                v = 2 * v + std::uint64_t(w[j]);
            std::vector<std::uint64_t> orbit;
            for (std::size_t j = 0; j < n; ++j, v = (2 * v) % den)
                orbit.push_back(v);
            auto sorted = orbit;
            std::sort(sorted.begin(), sorted.end());
            auto rank = [&](std::uint64_t x) { return int(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin()); };
            auto perm = lorenz_braid(w).permutation();
            bool ok = true;
            for (std::size_t j = 0; j < n; ++j)
                ok = ok && perm[rank(orbit[j])] == rank((2 * orbit[j]) % den);
            c.require(ok, "permutation of " + w.str());
        }
    }
    c.info << words << " words up to period 12";
}

void property_suites(Check& c)
{
    // symmetry of F_beta about 1/2 and of the two kneading sequences
    std::mt19937_64 rng(2028);
    std::uniform_real_distribution<double> ub(1.01, 2.0), ux(0.0, 1.0);
    double worst = 0;
    bool flips = true;
    for (int t = 0; t < 20; ++t) {
        auto f = symmetric_beta(ub(rng));
        for (int k = 0; k < 1000; ++k) {
            double x = ux(rng);
            if (std::abs(x - 0.5) > 1e-9)
                worst = std::max(worst, std::abs(f(1 - x) - (1 - f(x))));
        }
        auto k = kneading(f);
        std::size_t trusted = std::min<std::size_t>(64, std::size_t(std::log(1e9) / std::log(f.beta())));
        flips = flips && k.minus_prefix.substr(0, trusted) == flip(k.plus_prefix.substr(0, trusted));
    }
    c.require(worst < 1e-10, "symmetry residual " + num(worst));
    c.require(flips, "eta- is not the flip of eta+");

    std::vector<ExpandingLorenzMap> certified = {symmetric_beta(2.0), symmetric_beta(std::sqrt(2.0)),
                                                 symmetric_beta(beta_ladder(2)), symmetric_beta(beta_ladder(3)),
                                                 matching_example_map()};
    for (int i = 2; i <= 7; ++i)
        certified.push_back(symmetric_beta(epsilon(i)));
    for (const auto& m : certified) {
        auto k = kneading(m);
        c.require(k.certified_periodic && is_admissible_pair(*k.eta_plus, *k.eta_minus),
                  "kneading at " + num(m.beta()) + " not certified admissible");
    }

    std::size_t nest_pass = 0, nest_total = 0;
    for (int i = 2; i <= 5; ++i) {
        auto rep = subshift_inclusion_certificate(0.5 * (epsilon(i) + epsilon(i + 1)), i, 100, 100 + i);
        nest_pass += rep.lower_pass + rep.lower_undetermined + rep.upper_pass;
        nest_total += rep.lower_total + rep.upper_total;
        c.require(rep.lower_total == 100 && rep.upper_total == 100, "nesting sample count");
        c.require(rep.lower_pass + rep.lower_undetermined == rep.lower_total && rep.upper_pass == rep.upper_total,
                  "nesting fails at i=" + std::to_string(i));
    }

    std::string prev_p, prev_m;
    bool monotone = true;
    for (int j = 0; j < 200; ++j) {
        auto k = kneading(symmetric_beta(1.02 + 0.98 * j / 199.0), 40);
        if (j > 0)
            monotone = monotone && compare_prefix(k.plus_prefix, prev_p) <= 0 && compare_prefix(k.minus_prefix, prev_m) >= 0;
        prev_p = k.plus_prefix;
        prev_m = k.minus_prefix;
    }
    c.require(monotone, "kneading not monotone on the grid");
    c.info << "symmetry=" << num(worst) << " admissible " << certified.size() << " nesting " << nest_pass << "/"
           << nest_total << " monotone grid 200";
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    void (*run)(Check&);
};

} // namespace

int main()
{
    const Criterion criteria[] = {
        {1, "epsilon ladder", 1, ladder},
        {2, "kneading golden values", 1, kneading_goldens},
        {3, "renormalization identity and tower depth", 5, renormalization},
        {4, "period sets", 60, period_sets},
        {5, "bifurcation boundary at eps_2", 5, bifurcation_boundary},
        {6, "matching example map", 1, matching_map},
        {7, "non-symmetric region", 10, nonsymmetric_region},
        {8, "invariant density", 60, density_checks},
        {9, "rotation interval and entropy", 120, rotation_checks},
        {10, "Lorenz flow harness", 600, flow_harness},
        {11, "template combinatorics", 5, template_combinatorics},
        {12, "property suites", 120, property_suites},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > cr.budget_s)
            c.failures.push_back("runtime " + num(secs) + " s over budget " + num(cr.budget_s) + " s");
        bool pass = c.failures.empty();
        failed += !pass;
        std::printf("AC%-2d %s  %-42s %8.3f s  %s\n", cr.id, pass ? "PASS" : "FAIL", cr.name, secs, c.info.str().c_str());
        for (const auto& f : c.failures)
            std::printf("       - %s\n", f.c_str());
    }
    std::printf("%d/%zu criteria passed\n", int(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
