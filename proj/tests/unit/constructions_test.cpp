#include "cyclolab/constructions.hpp"
#include "cyclolab/cyclotomic.hpp"
#include "cyclolab/error.hpp"
#include "cyclolab/tiling.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace cyclo;

namespace {

void expect_accepted(const ConstructionReport& rep) {
    for (const auto& c : rep.claims) EXPECT_TRUE(c.holds) << rep.kind << ": " << c.claim << " (" << c.detail << ")";
    EXPECT_TRUE(rep.accepted());
}

Multiset dilate(const Multiset& a, i64 u) {
    i64 m = a.modulus().value();
    Multiset out(a.modulus());
    for (auto [x, w] : a.weights()) out.add_weight(mulmod(x, u, m), w);
    return out;
}

} // namespace

TEST(PrimePowerStandard, Examples) {
    EXPECT_EQ(prime_power_standard(2, {1, 3}).support(), (std::vector<i64>{0, 1, 4, 5}));
    EXPECT_EQ(prime_power_standard(3, {2}).support(), (std::vector<i64>{0, 3, 6}));
    EXPECT_THROW(prime_power_standard(2, {1, 1}), Error);
    EXPECT_THROW(prime_power_standard(4, {1}), Error);
    expect_accepted(prime_power_report(2, {1, 3, 4}));
    expect_accepted(prime_power_report(5, {2, 3}));
}

TEST(ThreePrimes, Examples) {
    for (auto [p1, p2, p3] : std::vector<std::array<i64, 3>>{{2, 3, 5}, {2, 5, 7}, {2, 11, 13}}) {
        auto rep = three_primes_report(p1, p2, p3);
        expect_accepted(rep);
        EXPECT_TRUE(rep.set->is_set());
    }
    EXPECT_THROW(example_three_primes(3, 5, 7), Error);
    EXPECT_THROW(example_three_primes(2, 3, 7), Error);
}

TEST(Countex23, AcceptedForSmallestParameters) {
    auto rep = countex_2_3_report(9, 6);
    expect_accepted(rep);
    EXPECT_EQ(rep.set->mass(), 216);
    EXPECT_THROW(countex_2_3(8, 6), Error);
    EXPECT_THROW(countex_2_3(9, 5), Error);
}

TEST(Countex23, LargerParameters) { expect_accepted(countex_2_3_report(10, 7)); }

TEST(Countex72, AuditAndUnsupportedTop) {
    auto rep = countex_72_report();
    expect_accepted(rep);
    const auto& a = *rep.set;
    auto cm = cm_report(a);
    EXPECT_EQ(cm.prime_power_divisors, (std::vector<i64>{2, 3, 4, 8, 9}));
    EXPECT_TRUE(cm.t1);
    auto top = std::find_if(cm.unsupported.begin(), cm.unsupported.end(), [](const UnsupportedDivisor& u) { return u.scale == 1296; });
    ASSERT_NE(top, cm.unsupported.end());
    EXPECT_EQ(top->tag, UnsupportedTag::AboveAllBeta);
    // Mixed products fail; frozen from an independent polynomial-remainder check of the table.
    EXPECT_FALSE(cm.t2);
    EXPECT_EQ(cm.t2_failures, (std::vector<i64>{6, 12, 18, 24, 36, 72}));
    EXPECT_THROW(t2_truncation_uniformity(a), Error);
}

TEST(Lift, SmallTable) {
    // Z_6 weights in {0, 2, 3} lift to Z_36 with one grid per weight.
    Multiset b(factor_modulus(6), {{0, 2}, {1, 3}, {5, 2}});
    auto a = lift_to_fibers(b, factor_modulus(36), 2, 3);
    EXPECT_TRUE(a.is_set());
    EXPECT_EQ(reduce_mod(a, 6), b);
    EXPECT_TRUE(divides(36, a));
    Multiset too_heavy(factor_modulus(6), {{0, 5}});
    EXPECT_THROW(lift_to_fibers(too_heavy, factor_modulus(36), 2, 3), Error);
}

TEST(Lift, Table216IntoLargeModulus) {
    Multiset b(factor_modulus(6));
    for (i64 x = 0; x < 6; ++x) b.add_weight(x, kTable216[static_cast<std::size_t>(x % 2)][static_cast<std::size_t>(x % 3)]);
    auto m = factor_modulus(checked_pow(2, 9) * checked_pow(3, 6));
    auto a = lift_to_fibers(b, m, 2, 3);
    EXPECT_TRUE(a.is_set());
    EXPECT_EQ(a.mass(), 216);
    EXPECT_EQ(reduce_mod(a, 6), b);
    EXPECT_TRUE(divides(m.value(), a));
}

TEST(RepAsPQ, Examples) {
    EXPECT_EQ(rep_as_p_q(6, 2, 3), std::make_pair(i64{3}, i64{0}));
    EXPECT_EQ(rep_as_p_q(13, 2, 3), std::make_pair(i64{5}, i64{1}));
    EXPECT_EQ(rep_as_p_q(0, 2, 3), std::make_pair(i64{0}, i64{0}));
    EXPECT_THROW(rep_as_p_q(1, 2, 3), Error);
}

TEST(CongruenceExponents, Examples) {
    EXPECT_EQ(congruence_exponents(3, 7, 3), std::make_pair(2, 2));
    EXPECT_EQ(congruence_exponents(5, 3, 4).first, 4);
    EXPECT_EQ(congruence_exponents(3, 5, 8).first, 64);
    EXPECT_THROW(congruence_exponents(2, 3, 4), Error);
}

TEST(Matrices, ShapesAndCuboids) {
    auto g = build_g(2);
    EXPECT_EQ(g.size(), 4u);
    EXPECT_EQ(g[3][3], 4);
    auto h = build_h(1);
    EXPECT_EQ(h, (Matrix{{2, 2, 0, 0}, {2, 2, 0, 0}, {0, 0, 2, 2}, {0, 0, 2, 2}}));
    Matrix ones{{1, 1}, {1, 1}};
    cuboid_add(ones, {0, 1}, {0, 1}, 1);
    EXPECT_EQ(ones, (Matrix{{2, 0}, {0, 2}}));
    EXPECT_THROW(cuboid_add(ones, {0, 1}, {0, 1}, 1), Error);
    EXPECT_EQ(ones, (Matrix{{2, 0}, {0, 2}}));
}

TEST(Matrices, ClearOnesSurrogate) {
    auto y = build_y(2, 2, 1);
    ASSERT_EQ(y.size(), 17u);
    ASSERT_EQ(y[0].size(), 33u);
    i64 added = clear_ones(y, 2, 2, 1);
    EXPECT_EQ(added, 16 + 4 * 3);
    for (i64 s : row_sums(y)) EXPECT_EQ(s, 33);
    for (i64 s : column_sums(y)) EXPECT_EQ(s, 17);
    for (const auto& row : y)
        for (i64 v : row) EXPECT_TRUE(v == 0 || (v >= 3 && v <= 17)) << v;
}

TEST(Matrices, RandomCuboidsPreserveMargins) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t rows = 2 + rng() % 6, cols = 2 + rng() % 6;
        Matrix y(rows, std::vector<i64>(cols));
        for (auto& row : y)
            for (auto& v : row) v = static_cast<i64>(rng() % 4);
        auto rs = row_sums(y), cs = column_sums(y);
        for (int step = 0; step < 50; ++step) {
            std::size_t r1 = rng() % rows, r2 = rng() % rows, c1 = rng() % cols, c2 = rng() % cols;
            if (r1 == r2 || c1 == c2) continue;
            Matrix before = y;
            try {
                cuboid_add(y, {r1, r2}, {c1, c2}, rng() % 2 ? 1 : -1);
            } catch (const Error&) {
                ASSERT_EQ(y, before);
            }
            for (const auto& row : y)
                for (i64 v : row) ASSERT_GE(v, 0);
        }
        ASSERT_EQ(row_sums(y), rs);
        ASSERT_EQ(column_sums(y), cs);
    }
}

TEST(GeneralTwoPrime, StructuralFor3And5) {
    auto rep = general_two_prime(3, 5, 1'000'000);
    expect_accepted(rep);
    auto param = [&](const std::string& key) {
        for (auto& [k, v] : rep.parameters)
            if (k == key) return v;
        return std::string{};
    };
    EXPECT_EQ(param("k"), "4");
    EXPECT_EQ(param("a"), "64");
    EXPECT_FALSE(rep.set.has_value());
    EXPECT_EQ(rep.claims.back().how, Verification::Structural);
}

TEST(FourPrime, Parameters) {
    auto fp = four_prime_params({7, 11, 13, 17});
    EXPECT_EQ(fp.k, 8);
    EXPECT_EQ(fp.d1, 119);
    EXPECT_EQ(fp.d2, 88);
    EXPECT_EQ(fp.d3, 13);
    EXPECT_FALSE(fp.paper_regime);
    EXPECT_THROW(four_prime_params({7, 11, 13, 29}), Error);
    EXPECT_TRUE(four_prime_params({41, 43, 47, 53}).paper_regime);
}

TEST(FourPrime, BoxesPartition) {
    for (auto primes : std::vector<std::array<i64, 4>>{{5, 7, 11, 13}, {7, 11, 13, 17}, {41, 43, 47, 53}}) {
        auto fp = four_prime_params(primes);
        auto boxes = four_prime_boxes(fp);
        std::vector<ReducedBox> flat;
        for (const auto& v : boxes) flat.insert(flat.end(), v.begin(), v.end());
        std::array<i64, 4> extent{};
        for (std::size_t i = 0; i < 4; ++i) extent[i] = checked_pow(primes[i], 3);
        EXPECT_TRUE(boxes_partition(flat, extent));
        flat.pop_back();
        EXPECT_FALSE(boxes_partition(flat, extent));
    }
}

TEST(FourPrime, SmallInstanceReport) {
    auto rep = four_prime({5, 7, 11, 13}, 4000, 3);
    expect_accepted(rep);
    ASSERT_TRUE(rep.symbolic.has_value());
    EXPECT_EQ(rep.symbolic->mass(), checked_pow(5 * 7 * 11 * 13, 3));
}

TEST(FourPrime, LargeInstanceIsStructural) {
    auto rep = four_prime({41, 43, 47, 53}, 1000, 1);
    expect_accepted(rep);
    EXPECT_EQ(rep.claims.back().how, Verification::Structural);
}

TEST(TwoPrimeT1T2, DilatesOfStandardSetsHaveNoUnsupportedDivisors) {
    std::mt19937_64 rng(11);
    const std::vector<i64> moduli{72, 108, 200, 225, 392, 675};
    for (int trial = 0; trial < 300; ++trial) {
        i64 m = moduli[rng() % moduli.size()];
        auto mod = factor_modulus(m);
        std::vector<i64> s_star;
        for (i64 d : divisors_of(m))
            if (d > 1 && is_prime_power(d) && rng() % 2) s_star.push_back(d);
        i64 u = 1 + static_cast<i64>(rng() % static_cast<u64>(m));
        while (gcd(u, m) != 1) ++u;
        auto a = translate(dilate(standard_prime_power_set(s_star, mod), u), static_cast<i64>(rng() % static_cast<u64>(m)));
        auto rep = cm_report(a);
        ASSERT_TRUE(rep.t1 && rep.t2);
        ASSERT_TRUE(rep.unsupported.empty()) << m;
    }
}
