#include "lorenz1d/kneading.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lorenz1d;

namespace {

// Newton on Q_i in long double, started right of the root.
long double newton_epsilon(int i)
{
    long double b = 2.0L - std::pow(2.0L, -(long double)i);
    for (int k = 0; k < 100; ++k) {
        long double q = std::pow(b, i) * (b - 2) + 1;
        long double dq = (i + 1) * std::pow(b, i) - 2 * i * std::pow(b, i - 1);
        b -= q / dq;
    }
    return b;
}

} // namespace

TEST(Kneading, EpsilonLadderPrintedValues)
{
    const double printed[] = {1.61803, 1.83929, 1.92756, 1.96595, 1.98358};
    for (int i = 2; i <= 6; ++i) {
        EXPECT_NEAR(epsilon(i), printed[i - 2], 1e-4) << i;
        EXPECT_LT(std::abs(q_poly(i, epsilon(i))), 1e-12) << i;
    }
    EXPECT_DOUBLE_EQ(epsilon(1), std::sqrt(2.0));
    EXPECT_NEAR(epsilon(2), (1 + std::sqrt(5.0)) / 2, 1e-13);
}

TEST(Kneading, EpsilonAgreesWithNewton)
{
    for (int i = 2; i <= 20; ++i)
        EXPECT_NEAR(epsilon(i), (double)newton_epsilon(i), 1e-12) << i;
}

TEST(Kneading, LadderIncreasesToTwo)
{
    auto eps = epsilon_ladder(30);
    for (std::size_t k = 1; k < eps.size(); ++k)
        EXPECT_LT(eps[k - 1], eps[k]);
    EXPECT_LT(eps.back(), 2.0);
    EXPECT_GT(eps.back(), 2.0 - 1e-8);
    EXPECT_THROW(epsilon(0), PreconditionError);
}

TEST(Kneading, BetaLadder)
{
    for (int i = 0; i <= 6; ++i)
        EXPECT_NEAR(std::pow(beta_ladder(i), std::pow(2.0, i)), 2.0, 1e-13) << i;
    EXPECT_DOUBLE_EQ(beta_ladder(1), std::sqrt(2.0));
}

TEST(Kneading, EpsilonKneadings)
{
    for (int i = 2; i <= 8; ++i) {
        auto k = kneading(symmetric_beta(epsilon(i)));
        ASSERT_TRUE(k.certified_periodic) << i;
        EXPECT_EQ(*k.eta_plus, one_zeros(i));
        EXPECT_EQ(*k.eta_minus, zero_ones(i));
        EXPECT_FALSE(k.flagged());
    }
    auto k = kneading(symmetric_beta(beta_ladder(2)));
    ASSERT_TRUE(k.certified_periodic);
    EXPECT_EQ(k.eta_plus->text(), "1001|0110");
    EXPECT_EQ(k.eta_minus->text(), "0110|1001");
}

TEST(Kneading, ClassifyExamples)
{
    EXPECT_EQ(classify_beta(1.3).kind, BetaClassKind::below_sqrt2);
    auto s = classify_beta(std::sqrt(2.0));
    EXPECT_EQ(s.kind, BetaClassKind::at_epsilon);
    EXPECT_EQ(s.index, 1);
    EXPECT_TRUE(s.certified);

    auto e3 = classify_beta(epsilon(3));
    EXPECT_EQ(e3.kind, BetaClassKind::at_epsilon);
    EXPECT_EQ(e3.index, 3);
    EXPECT_TRUE(e3.certified);

    auto b = classify_beta(1.7);
    EXPECT_EQ(b.kind, BetaClassKind::between);
    EXPECT_EQ(b.index, 2);
    EXPECT_TRUE(b.certified);

    auto d = classify_beta(2.0);
    EXPECT_EQ(d.kind, BetaClassKind::doubling);
    EXPECT_TRUE(d.certified);
    EXPECT_EQ(classify_beta(2.0 - 1e-10).kind, BetaClassKind::beyond_ladder);
    EXPECT_THROW(classify_beta(2.5), PreconditionError);
}

TEST(Kneading, ClassifyBetweenIsCertifiedOnRandomBetas)
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ub(std::sqrt(2.0) + 1e-6, epsilon(12));
    for (int t = 0; t < 200; ++t) {
        double b = ub(rng);
        auto c = classify_beta(b);
        ASSERT_EQ(c.kind, BetaClassKind::between) << b;
        EXPECT_LT(c.eps_lo, b);
        EXPECT_GT(c.eps_hi, b);
        EXPECT_TRUE(c.certified) << b;
    }
}

TEST(Kneading, BetaFromKneadingRoundTrip)
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ub(1.45, 1.999);
    for (int t = 0; t < 40; ++t) {
        double b = ub(rng);
        auto target = upper_kneading_prefix(b, 64);
        auto fit = beta_from_kneading(target, 48);
        EXPECT_TRUE(fit.realizable);
        EXPECT_NEAR(fit.beta, b, 1e-7) << b;
        EXPECT_GE(fit.match_len, 48u);
    }
}

TEST(Kneading, BetaFromKneadingReproducesPrefixForSmallBeta)
{
    // slow symbol growth near 1: the prefix fixes beta only loosely
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> ub(1.05, 1.45);
    for (int t = 0; t < 20; ++t) {
        double b = ub(rng);
        auto target = upper_kneading_prefix(b, 64);
        auto fit = beta_from_kneading(target, 48);
        EXPECT_TRUE(fit.realizable);
        EXPECT_EQ(upper_kneading_prefix(fit.beta, 48), target.substr(0, 48)) << b;
        EXPECT_LE(fit.lo, b + 1e-10);
        EXPECT_GE(fit.hi, b - 1e-10);
    }
}

TEST(Kneading, BetaFromKneadingExactTargets)
{
    auto f = beta_from_kneading(one_zeros(3), 64);
    EXPECT_NEAR(f.beta, epsilon(3), 1e-9);
    auto d = beta_from_kneading(SymbolStream("1", "0"), 64);
    EXPECT_NEAR(d.beta, 2.0, 1e-9);
    EXPECT_THROW(beta_from_kneading(std::string("0101"), 4), PreconditionError);
    // 11... is above every eta+ of the family
    auto u = beta_from_kneading(std::string("1100000000"), 10);
    EXPECT_FALSE(u.realizable);
}

TEST(Kneading, MembershipWithPrefixInvariant)
{
    auto k = kneading(symmetric_beta(1.77), 64);
    ASSERT_FALSE(k.certified_periodic);
    EXPECT_EQ(member_of_subshift(SymbolStream::periodic("10"), k), Membership::member);
    EXPECT_EQ(member_of_subshift(SymbolStream("1", "0"), k), Membership::non_member);
    auto kc = kneading(symmetric_beta(epsilon(3)), 64);
    EXPECT_EQ(member_of_subshift(one_zeros(3), kc), Membership::member);
}

TEST(Kneading, SubshiftNesting)
{
    // (eps_i, eps_{i+1}) sits between the two ladder subshifts
    for (int i = 2; i <= 5; ++i) {
        double b = 0.5 * (epsilon(i) + epsilon(i + 1));
        auto rep = subshift_inclusion_certificate(b, i, 100, 100 + i);
        EXPECT_EQ(rep.lower_total, 100u);
        EXPECT_EQ(rep.lower_pass + rep.lower_undetermined, rep.lower_total);
        EXPECT_EQ(rep.upper_pass, rep.upper_total);
        EXPECT_EQ(rep.upper_total, 100u);
    }
}

TEST(Kneading, OnsetOfPeriodThreeOrbit)
{
    auto o = rejection_onset(Word("100"), 1.9, 1.2);
    ASSERT_TRUE(o.found);
    EXPECT_TRUE(o.collision_seen);
    EXPECT_LT(std::abs(o.lo - epsilon(2)), 1e-6);
    EXPECT_LT(std::abs(o.hi - epsilon(2)), 1e-6);
}
