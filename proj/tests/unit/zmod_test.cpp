#include "cyclolab/error.hpp"
#include "cyclolab/zmod.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace cyclo;

namespace {

// Brute-force CRT solve: search coordinate tuples until sum x_i M_i == x.
std::vector<i64> crt_search(i64 x, const CyclicModulus& m) {
    std::vector<i64> c(m.rank(), 0);
    while (true) {
        i64 v = 0;
        for (std::size_t i = 0; i < m.rank(); ++i) v = (v + c[i] * m.cofactor(i)) % m.value();
        if (v == x) return c;
        std::size_t i = 0;
        while (i < m.rank() && ++c[i] == m.prime_power(i)) c[i++] = 0;
        if (i == m.rank()) return {};
    }
}

} // namespace

TEST(FactorModulus, SmallModuli) {
    auto m = factor_modulus(12);
    ASSERT_EQ(m.rank(), 2u);
    EXPECT_EQ(m.factors()[0], (PrimePower{2, 2}));
    EXPECT_EQ(m.factors()[1], (PrimePower{3, 1}));
    EXPECT_EQ(m.cofactor(0), 3);
    EXPECT_EQ(m.cofactor(1), 4);

    auto two = factor_modulus(2);
    ASSERT_EQ(two.rank(), 1u);
    EXPECT_EQ(two.factors()[0], (PrimePower{2, 1}));
}

TEST(FactorModulus, TrialDivisionOracle) {
    // 373248 = 2^9 * 3^6; recompute by naive trial division.
    i64 n = 373248, e2 = 0, e3 = 0;
    while (n % 2 == 0) n /= 2, ++e2;
    while (n % 3 == 0) n /= 3, ++e3;
    ASSERT_EQ(n, 1);
    auto m = factor_modulus(373248);
    ASSERT_EQ(m.rank(), 2u);
    EXPECT_EQ(m.factors()[0], (PrimePower{2, static_cast<int>(e2)}));
    EXPECT_EQ(m.factors()[1], (PrimePower{3, static_cast<int>(e3)}));
}

TEST(FactorModulus, RejectsTinyModuli) {
    for (i64 bad : {-5, 0, 1}) {
        try {
            factor_modulus(bad);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::InvalidModulus);
        }
    }
}

TEST(FactorModulus, LargeCofactorsUseMillerRabin) {
    i64 p = 1'000'000'007;
    auto m = factor_modulus(4 * p);
    ASSERT_EQ(m.rank(), 2u);
    EXPECT_EQ(m.prime(1), p);
    auto big = factor_modulus(p * 998'244'353LL);
    ASSERT_EQ(big.rank(), 2u);
    EXPECT_EQ(big.prime(0), 998'244'353LL);
    EXPECT_EQ(big.prime(1), p);
}

TEST(Coords, KnownValues) {
    auto m = factor_modulus(12);
    EXPECT_EQ(to_coords(0, m).coords, (std::vector<i64>{0, 0}));
    EXPECT_EQ(to_coords(7, m).coords, crt_search(7, m));
    EXPECT_EQ(to_coords(7, m).coords, (std::vector<i64>{1, 1}));
    EXPECT_EQ(to_coords(6, m).coords, crt_search(6, m));
    EXPECT_EQ(to_coords(6, m).coords, (std::vector<i64>{2, 0}));
}

TEST(Coords, DigitsRebuildCoordinate) {
    auto m = factor_modulus(2 * 2 * 2 * 27);
    for (i64 x = 0; x < m.value(); ++x) {
        auto c = to_coords(x, m);
        for (std::size_t i = 0; i < m.rank(); ++i) EXPECT_EQ(from_digits(c.digits[i], m.prime(i)), c.coords[i]);
    }
}

TEST(Coords, BijectionExhaustive) {
    // Every M <= 10^4 would take too long under a debug build; step through a spread of moduli instead
    // and exhaust each one.
    for (i64 mv = 2; mv <= 10000; mv += (mv < 400 ? 1 : 97)) {
        auto m = factor_modulus(mv);
        std::vector<char> hit(static_cast<std::size_t>(mv), 0);
        for (i64 x = 0; x < mv; ++x) {
            auto c = to_coords(x, m);
            ASSERT_EQ(from_coords(c, m), x) << mv;
            i64 back = from_coord_vector(c.coords, m);
            hit[static_cast<std::size_t>(back)] = 1;
        }
        EXPECT_TRUE(std::all_of(hit.begin(), hit.end(), [](char h) { return h == 1; })) << mv;
    }
}

TEST(Radical, Examples) {
    auto m = factor_modulus(1296);
    EXPECT_EQ(radical_reduced(6, factor_modulus(6)).reduced, 1);
    EXPECT_EQ(radical_reduced(12, factor_modulus(12)).reduced, 2);
    auto r = radical_reduced(1296, m);
    EXPECT_EQ(r.reduced, 216);
    EXPECT_EQ(r.primes, (std::vector<i64>{2, 3}));
    try {
        radical_reduced(5, m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidScale);
    }
}

TEST(Radical, ProductIdentity) {
    auto m = factor_modulus(2 * 2 * 2 * 3 * 3 * 5 * 7 * 7);
    for (i64 n = 1; n <= m.value(); ++n) {
        if (m.value() % n != 0) continue;
        auto r = radical_reduced(n, m);
        i64 prod = std::accumulate(r.primes.begin(), r.primes.end(), i64{1}, std::multiplies<>());
        EXPECT_EQ(r.reduced * prod, n);
    }
}

TEST(Fibers, Elements) {
    auto m = factor_modulus(12);
    EXPECT_EQ(fiber_elements(FiberSpec{12, 2, 0}, m), (std::vector<i64>{0, 6}));
    EXPECT_EQ(fiber_elements(FiberSpec{12, 3, 0}, m), (std::vector<i64>{0, 4, 8}));
    EXPECT_EQ(fiber_elements(LongFiberSpec{2, 2, 0}, factor_modulus(8)), (std::vector<i64>{0, 2, 4, 6}));
    try {
        fiber_elements(FiberSpec{4, 3, 0}, m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidDirection);
    }
}

TEST(Fibers, DifferencesHaveExpectedGcd) {
    auto m = factor_modulus(360);
    for (i64 n : divisors_of(360)) {
        if (n == 1) continue;
        for (auto [p, e] : factorize(n)) {
            for (i64 x = 0; x < n; x += 7) {
                auto el = fiber_elements(FiberSpec{n, p, x}, m);
                ASSERT_EQ(static_cast<i64>(el.size()), p);
                for (std::size_t a = 0; a < el.size(); ++a)
                    for (std::size_t b = a + 1; b < el.size(); ++b) EXPECT_EQ(gcd(el[a] - el[b], n), n / p);
            }
        }
    }
}

TEST(Grid, ElementCount) {
    auto g = grid_elements(GridSpec{36, 5, 6});
    EXPECT_EQ(g, (std::vector<i64>{5, 11, 17, 23, 29, 35}));
    EXPECT_TRUE(grid_contains(GridSpec{36, 5, 6}, 23));
    EXPECT_FALSE(grid_contains(GridSpec{36, 5, 6}, 24));
}
