#include "cyclolab/cyclotomic.hpp"
#include "cyclolab/error.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cyclo;

namespace {

Multiset table1() {
    const i64 t[2][3] = {{74, 47, 47}, {34, 7, 7}};
    Multiset a(factor_modulus(6));
    for (i64 x = 0; x < 6; ++x) a.add_weight(x, t[x % 2][x % 3]);
    return a;
}

Multiset uniform(i64 m) {
    Multiset a(factor_modulus(m));
    for (i64 x = 0; x < m; ++x) a.add_weight(x, 1);
    return a;
}

} // namespace

TEST(CyclotomicPoly, KnownForms) {
    EXPECT_EQ(cyclotomic_poly(6), (Poly{1, -1, 1}));
    EXPECT_EQ(cyclotomic_poly(6), cyclotomic_poly_by_division(6));
    EXPECT_EQ(cyclotomic_poly(7), Poly(7, 1));
    // Phi_{p^a}(X) = Phi_p(X^{p^{a-1}}).
    Poly phi27(19, 0);
    phi27[0] = phi27[9] = phi27[18] = 1;
    EXPECT_EQ(cyclotomic_poly(27), phi27);
    EXPECT_EQ(cyclotomic_poly(1), (Poly{-1, 1}));
}

TEST(CyclotomicPoly, FastPathMatchesIteratedDivision) {
    for (i64 s = 1; s <= 210; ++s) EXPECT_EQ(cyclotomic_poly(s), cyclotomic_poly_by_division(s)) << s;
    EXPECT_EQ(cyclotomic_poly(105), cyclotomic_poly_by_division(105));  // first index with a coefficient -2
}

TEST(CyclotomicPoly, ProductOverDivisorsIsBinomial) {
    std::vector<i64> ns;
    for (i64 n = 1; n <= 300; ++n) ns.push_back(n);
    for (i64 n : {360, 720, 1001, 2310, 4096, 5040, 6561, 9240, 9973, 10000}) ns.push_back(n);
    for (i64 n : ns) {
        Poly prod{1};
        for (i64 d : divisors_of(n)) prod = poly_mul(prod, cyclotomic_poly(d));
        Poly expect(static_cast<std::size_t>(n) + 1, 0);
        expect[0] = -1;
        expect[static_cast<std::size_t>(n)] = 1;
        ASSERT_EQ(prod, expect) << n;
    }
}

TEST(CyclotomicPoly, ValueAtOne) {
    for (i64 s = 2; s <= 10000; ++s) {
        const Poly& phi = cyclotomic_poly(s);
        i64 sum = 0;
        for (i64 c : phi) sum += c;
        ASSERT_EQ(sum, cyclotomic_at_one(s)) << s;
        auto f = factorize(s);
        ASSERT_EQ(sum, f.size() == 1 ? f[0].first : 1) << s;
        ASSERT_EQ(static_cast<i64>(phi.size()) - 1, euler_phi(s));
    }
}

TEST(Divides, FiberExamples) {
    auto a = Multiset::from_points(factor_modulus(12), {0, 6});
    EXPECT_TRUE(divides(4, a));
    EXPECT_TRUE(divides(12, a));
    EXPECT_FALSE(divides(6, a));
    EXPECT_FALSE(divides(3, a));
    EXPECT_FALSE(divides(2, a));
    EXPECT_THROW(divides(5, a), Error);
}

TEST(Divides, UniformIsDivisibleEverywhere) {
    for (i64 m : {12, 30, 72}) {
        auto u = uniform(m);
        for (i64 s : divisors_of(m))
            if (s > 1) EXPECT_TRUE(divides(s, u));
    }
}

TEST(Divides, CuboidMethodExamples) {
    EXPECT_TRUE(divides_via_cuboids(6, table1()));
    EXPECT_TRUE(divides(6, table1()));
    auto single = Multiset::from_points(factor_modulus(6), {0});
    EXPECT_FALSE(divides_via_cuboids(6, single));
    EXPECT_FALSE(divides(6, single));
}

TEST(Divides, CuboidCapIsEnforced) {
    // 2*3*5*7*11*13*17 * 1*2*4*6*10*12*16 is far beyond the cap.
    i64 n = 2 * 3 * 5 * 7 * 11 * 13 * 17;
    auto a = Multiset::from_points(factor_modulus(n), {0});
    try {
        divides_via_cuboids(n, a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UseRemainderMethod);
    }
}

TEST(Divides, MethodsAgreeOnRandomInputs) {
    std::mt19937_64 rng(7);
    for (i64 m : {12, 36, 60}) {
        auto zm = factor_modulus(m);
        auto divs = divisors_of(m);
        for (int trial = 0; trial < 1000 / 3 + 1; ++trial) {
            // Mix plain random multisets with fiber sums so both answers occur.
            Multiset a(zm);
            std::uniform_int_distribution<i64> pos(0, m - 1), w(-2, 3);
            std::uniform_int_distribution<std::size_t> pick(1, divs.size() - 1);
            if (trial % 2 == 0) {
                for (int k = 0; k < 6; ++k) a.add_weight(pos(rng), w(rng));
            } else {
                i64 n = divs[pick(rng)];
                for (int k = 0; k < 4; ++k) {
                    auto f = factorize(n);
                    i64 p = f[static_cast<std::size_t>(k) % f.size()].first;
                    // Elements of Z_n are also elements of Z_m; A mod n then contains the fiber.
                    for (i64 x : fiber_elements(FiberSpec{n, p, pos(rng) % n}, zm.sub(n))) a.add_weight(x, 1);
                }
            }
            for (i64 s : divs) {
                if (s == 1) continue;
                ASSERT_EQ(divides(s, a), divides_via_cuboids(s, a)) << m << " " << s;
            }
        }
    }
}

TEST(Divides, TranslationInvariance) {
    std::mt19937_64 rng(99);
    auto zm = factor_modulus(72);
    for (int trial = 0; trial < 40; ++trial) {
        Multiset a(zm);
        std::uniform_int_distribution<i64> pos(0, 71), w(0, 2);
        for (int k = 0; k < 10; ++k) a.add_weight(pos(rng), w(rng));
        a = add(a, convolve(Multiset::from_points(zm, {pos(rng)}), Multiset::from_points(zm, {0, 24, 48})));
        for (i64 s : divisors_of(72)) {
            if (s == 1) continue;
            bool base = divides(s, a);
            for (i64 t : {1, 5, 17, 36}) EXPECT_EQ(divides(s, translate(a, t)), base);
        }
    }
}

TEST(Divisors, AllAndPrimePower) {
    auto a = Multiset::from_points(factor_modulus(12), {0, 6});
    EXPECT_EQ(all_divisors(a), (std::vector<i64>{4, 12}));
    EXPECT_EQ(prime_power_divisors(a), (std::vector<i64>{4}));
    EXPECT_EQ(prime_power_divisors(uniform(8)), (std::vector<i64>{2, 4, 8}));
    try {
        all_divisors(Multiset(factor_modulus(12)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UndefinedDivisors);
    }
}

TEST(Divisors, ChainDivides) {
    auto m = factor_modulus(72);
    // Long fiber F_{2,2} on Z_72 is divisible by Phi_L exactly for 4 | L | 72 with 2-part >= 2^{3-2+1}.
    auto lf = long_fiber_multiset(LongFiberSpec{2, 2, 5}, m);
    EXPECT_TRUE(chain_divides(lf, 72, 3, 2));
    auto a = Multiset::from_points(factor_modulus(12), {0, 6});
    EXPECT_FALSE(chain_divides(a, 12, 2, 2));
    EXPECT_TRUE(chain_divides(uniform(72), 72, 2, 3));
    EXPECT_TRUE(chain_divides(uniform(72), 24, 3, 1));
    // Along a pure prime power the chain ends at Phi_1, which kills only zero-mass multisets.
    EXPECT_FALSE(chain_divides(uniform(72), 8, 2, 3));
    EXPECT_THROW(chain_divides(a, 12, 5, 1), Error);
}

TEST(ScaleSetTest, Validation) {
    auto s = ScaleSet::over_lcm({6, 5});
    EXPECT_EQ(s.modulus().value(), 30);
    EXPECT_EQ(s.scales(), (std::vector<i64>{5, 6}));
    EXPECT_THROW(ScaleSet(factor_modulus(12), {1, 6}), Error);
    EXPECT_THROW(ScaleSet(factor_modulus(12), {5}), Error);
    auto big = ScaleSet(factor_modulus(373248), {512, 256, 128, 6, 729, 243, 81});
    auto prof = exponent_profile(big);
    EXPECT_EQ(prof.exps[0], (std::vector<int>{1, 7, 8, 9}));
    EXPECT_EQ(prof.exps[1], (std::vector<int>{1, 4, 5, 6}));
}
