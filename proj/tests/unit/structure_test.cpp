#include "cyclolab/cyclotomic.hpp"
#include "cyclolab/error.hpp"
#include "cyclolab/structure.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

using namespace cyclo;

namespace {

Multiset table1() {
    const i64 t[2][3] = {{74, 47, 47}, {34, 7, 7}};
    Multiset a(factor_modulus(6));
    for (i64 x = 0; x < 6; ++x) a.add_weight(x, t[x % 2][x % 3]);
    return a;
}

Multiset points(i64 m, std::initializer_list<i64> xs) {
    Multiset a(factor_modulus(m));
    for (i64 x : xs) a.add_weight(x, 1);
    return a;
}

// Random integer combination of N-fibers, lifted to Z_M by random multiples of N.
Multiset random_fibered(const CyclicModulus& m, i64 n, std::mt19937_64& rng, int terms, i64 lo, i64 hi) {
    auto primes = factorize(n);
    std::uniform_int_distribution<std::size_t> dir(0, primes.size() - 1);
    std::uniform_int_distribution<i64> pos(0, n - 1), lift(0, m.value() / n - 1), coeff(lo, hi);
    Multiset a(m);
    for (int k = 0; k < terms; ++k) {
        i64 p = primes[dir(rng)].first, x = pos(rng), c = coeff(rng);
        for (i64 nu = 0; nu < p; ++nu) a.add_weight((x + nu * (n / p)) % n + n * lift(rng), c);
    }
    return a;
}

Multiset random_long_fibered(const CyclicModulus& m, i64 n, std::mt19937_64& rng, int terms) {
    std::uniform_int_distribution<std::size_t> dir(0, m.rank() - 1);
    std::uniform_int_distribution<i64> pos(0, m.value() - 1), coeff(0, 4);
    Multiset a(m);
    for (int k = 0; k < terms; ++k) {
        std::size_t i = dir(rng);
        int depth = m.exponent(i) - valuation(n, m.prime(i)) + 1;
        a = add(a, scale(long_fiber_multiset({m.prime(i), depth, pos(rng)}, m), coeff(rng)));
    }
    return a;
}

bool has_negative(const FiberDecomposition& d) {
    return std::any_of(d.terms.begin(), d.terms.end(), [](const FiberTerm& t) { return t.coeff < 0; });
}

} // namespace

TEST(FiberDecompose, SingleFiber) {
    auto m = factor_modulus(30);
    auto a = fiber_multiset({30, 5, 7}, m);
    auto d = fiber_decompose(a, 30);
    ASSERT_EQ(d.terms.size(), 1u);
    EXPECT_EQ(d.terms[0].prime, 5);
    EXPECT_EQ(d.terms[0].coeff, 1);
    EXPECT_EQ(d.terms[0].shift % 6, 1);
}

TEST(FiberDecompose, UniformReconstructs) {
    auto m = factor_modulus(6);
    Multiset a(m);
    for (i64 x = 0; x < 6; ++x) a.add_weight(x, 1);
    auto d = fiber_decompose(a, 6);
    EXPECT_EQ(reconstruct(d, m), a);
}

TEST(FiberDecompose, NotDivisible) {
    try {
        fiber_decompose(points(6, {0, 1}), 6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotDivisible);
    }
}

TEST(FiberDecompose, ThreePrimeSetNeedsNegativeCoefficient) {
    // F_5 through 0 plus F_3 through 5 minus F_2 through 0.
    auto a = points(30, {5, 6, 12, 18, 24, 25});
    ASSERT_TRUE(divides(30, a));
    auto d = fiber_decompose(a, 30);
    EXPECT_TRUE(has_negative(d));
    EXPECT_EQ(reconstruct(d, a.modulus()), a);

    // Exhaustive oracle: no nonnegative sum of 30-fibers equals A (mass 6 forces 2+2+2 or 3+3).
    std::vector<std::set<i64>> fibers;
    for (i64 p : {2, 3, 5})
        for (i64 x = 0; x < 30 / p; ++x) {
            std::set<i64> f;
            for (i64 nu = 0; nu < p; ++nu) f.insert(x + nu * 30 / p);
            fibers.push_back(f);
        }
    auto support = a.support();
    std::set<i64> target(support.begin(), support.end());
    bool found = false;
    std::function<void(std::size_t, std::multiset<i64>)> search = [&](std::size_t from, std::multiset<i64> acc) {
        if (acc.size() == 6) {
            found |= std::set<i64>(acc.begin(), acc.end()) == target && std::set<i64>(acc.begin(), acc.end()).size() == 6;
            return;
        }
        for (std::size_t k = from; k < fibers.size(); ++k) {
            if (acc.size() + fibers[k].size() > 6) continue;
            auto next = acc;
            next.insert(fibers[k].begin(), fibers[k].end());
            search(k, next);
        }
    };
    search(0, {});
    EXPECT_FALSE(found);
}

TEST(FiberDecompose, RandomRoundTrip) {
    std::mt19937_64 rng(11);
    for (i64 n : {12, 30, 36, 60, 105, 210}) {
        auto m = factor_modulus(n * 2);
        for (int trial = 0; trial < 20; ++trial) {
            auto a = random_fibered(m, n, rng, 6, -3, 3);
            auto d = fiber_decompose(a, n);
            EXPECT_EQ(reconstruct(d, m), reduce_mod(a, n));
        }
    }
}

TEST(FiberDecompose, Deterministic) {
    std::mt19937_64 rng(3);
    auto m = factor_modulus(60);
    auto a = random_fibered(m, 60, rng, 5, -2, 2);
    auto d1 = fiber_decompose(a, 60), d2 = fiber_decompose(a, 60);
    EXPECT_EQ(d1.terms, d2.terms);
}

TEST(NonnegTwoPrime, Table1) {
    auto a = table1();
    auto d = fiber_decompose_nonneg_two_prime(a, 6);
    EXPECT_TRUE(d.nonnegative);
    EXPECT_FALSE(has_negative(d));
    EXPECT_EQ(reconstruct(d, a.modulus()), a);
}

TEST(NonnegTwoPrime, OneFiberOfEachType) {
    auto m = factor_modulus(6);
    auto a = add(fiber_multiset({6, 2, 1}, m), fiber_multiset({6, 3, 0}, m));
    auto d = fiber_decompose_nonneg_two_prime(a, 6);
    ASSERT_EQ(d.terms.size(), 2u);
    EXPECT_EQ(d.terms[0].prime, 2);
    EXPECT_EQ(d.terms[1].prime, 3);
    EXPECT_EQ(reconstruct(d, m), a);
}

TEST(NonnegTwoPrime, Errors) {
    try {
        fiber_decompose_nonneg_two_prime(points(6, {0, 1}), 6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotDivisible);
    }
    EXPECT_THROW(fiber_decompose_nonneg_two_prime(points(30, {0, 15}), 30), Error);
    Multiset neg(factor_modulus(6));
    neg.add_weight(0, -1);
    neg.add_weight(3, -1);
    EXPECT_THROW(fiber_decompose_nonneg_two_prime(neg, 6), Error);
}

TEST(NonnegTwoPrime, RandomNeverNegative) {
    std::mt19937_64 rng(5);
    for (i64 n : {6, 12, 18, 36, 72, 100, 225}) {
        auto m = factor_modulus(n * 3);
        for (int trial = 0; trial < 30; ++trial) {
            auto a = random_fibered(m, n, rng, 7, 0, 4);
            auto d = fiber_decompose_nonneg_two_prime(a, n);
            EXPECT_FALSE(has_negative(d));
            EXPECT_EQ(reconstruct(d, m), reduce_mod(a, n));
        }
    }
}

TEST(LongFiber, GcdProductOnZ36) {
    Poly g{1};
    for (i64 l : {6, 12, 18, 36}) g = poly_mul(g, cyclotomic_poly(l));
    auto m = factor_modulus(36);
    Multiset a(m);
    for (std::size_t k = 0; k < g.size(); ++k) a.add_weight(static_cast<i64>(k), g[k]);
    auto d = long_fiber_decompose(a, 6);
    EXPECT_EQ(d.block, 6);
    EXPECT_EQ(reconstruct(d, m), a);
    for (const auto& t : d.terms) EXPECT_EQ(t.depth, 2);
}

TEST(LongFiber, SingleLongFiber) {
    auto m = factor_modulus(72);
    auto a = long_fiber_multiset({2, 3, 5}, m);
    auto d = long_fiber_decompose(a, 6);
    ASSERT_EQ(d.terms.size(), 1u);
    EXPECT_EQ(d.terms[0].prime, 2);
    EXPECT_EQ(d.terms[0].depth, 3);
    EXPECT_EQ(reconstruct(d, m), a);
}

TEST(LongFiber, ReportsFirstFailingScale) {
    auto a = points(36, {0, 3, 18, 21});  // Phi_6 and Phi_12 divide, Phi_18 does not
    try {
        long_fiber_decompose(a, 6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotDivisible);
        EXPECT_NE(std::string(e.what()).find("Phi_18"), std::string::npos);
    }
}

TEST(LongFiber, RandomNonnegRoundTrip) {
    std::mt19937_64 rng(9);
    for (i64 m_value : {72, 108, 200}) {
        auto m = factor_modulus(m_value);
        for (i64 n : divisors_of(m_value)) {
            if (n % radical(m_value) != 0) continue;
            for (int trial = 0; trial < 10; ++trial) {
                auto a = random_long_fibered(m, n, rng, 5);
                auto d = long_fiber_decompose(a, n);
                EXPECT_TRUE(d.nonnegative);
                EXPECT_FALSE(has_negative(d));
                EXPECT_EQ(reconstruct(d, m), a);
            }
        }
    }
}

TEST(LongFiber, ThreePrimeSigned) {
    std::mt19937_64 rng(13);
    auto m = factor_modulus(360);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_long_fibered(m, 30, rng, 6);
        auto d = long_fiber_decompose(a, 30);
        EXPECT_FALSE(d.nonnegative);
        EXPECT_EQ(reconstruct(d, m), a);
    }
}

TEST(Truncation, DigitMapFixesZeroDigit) {
    auto m = factor_modulus(72);
    // x = 8 * 1 has 2-coordinate 0 and the 3-coordinate digit x_{3,1} = 0.
    for (i64 x = 0; x < 72; ++x) {
        auto c = coords_of(x, m);
        auto a = points(72, {x});
        auto t = truncate_digit(a, 3, 2);
        if ((c[1] / 3) % 3 == 0) EXPECT_EQ(t, a);
        EXPECT_EQ(t.mass(), 1);
    }
    EXPECT_THROW(truncate_digit(points(72, {1}), 3, 3), Error);
    EXPECT_THROW(truncate_digit(points(72, {1}), 3, 0), Error);
}

TEST(Truncation, FibersMapToFibers) {
    std::mt19937_64 rng(17);
    for (i64 mv : {72, 360, 1800}) {
        auto m = factor_modulus(mv);
        for (i64 n : divisors_of(mv)) {
            if (n < 2) continue;
            auto zn = m.sub(n);
            for (auto [pj, e] : factorize(n))
                for (std::size_t i = 0; i < m.rank(); ++i)
                    for (int alpha = 1; alpha <= m.exponent(i); ++alpha) {
                        int beta = valuation(n, m.prime(i));
                        if (m.prime(i) == pj && beta == alpha) continue;
                        std::uniform_int_distribution<i64> pos(0, n - 1), lift(0, mv / n - 1);
                        i64 x = pos(rng);
                        Multiset f(m);
                        for (i64 nu = 0; nu < pj; ++nu) f.add_weight((x + nu * (n / pj)) % n + n * lift(rng), 1);
                        auto image = truncate_digit(f, m.prime(i), alpha);
                        i64 tx = truncate_digit(points(mv, {x}), m.prime(i), alpha).support()[0];
                        EXPECT_EQ(reduce_mod(image, n), fiber_multiset({n, pj, tx % n}, zn))
                            << "M=" << mv << " N=" << n << " j=" << pj << " i=" << m.prime(i) << " alpha=" << alpha;
                    }
        }
    }
}

TEST(Truncation, LargeScaleSetTarget) {
    i64 p = 2, q = 3;
    auto pw = [](i64 b, unsigned e) { return checked_pow(b, e); };
    std::vector<i64> s = {pw(q, 2), pw(p, 3), pw(q, 4), pw(p, 3) * pw(q, 4), pw(p, 10), pw(q, 10), pw(p, 10) * pw(q, 10)};
    auto t = truncation_target(ScaleSet::over_lcm(s));
    EXPECT_EQ(t.modulus.value(), 4 * 27);
    std::set<i64> images;
    for (auto [from, to] : t.scale_map) images.insert(to);
    // p1, p2, p1 p2^2 and p1^2 p2^3 appear; the remaining scales land on q^2, p^2 and q^3.
    EXPECT_EQ(images, (std::set<i64>{2, 3, 4, 9, 18, 27, 108}));
}

TEST(Truncation, RoundTripOnStandardLikeSet) {
    // A = F_{2,3} * F_{3,1} long fibers on Z_{2^4 3^3}: divisible by many scales.
    auto m = factor_modulus(16 * 27);
    auto a = convolve(long_fiber_multiset({2, 3, 0}, m), long_fiber_multiset({3, 1, 0}, m));
    auto divs = all_divisors(a);
    std::vector<i64> chosen;
    for (i64 s : divs)
        if (s != 1 && (s % 4 == 0 || s % 27 == 0)) chosen.push_back(s);
    ScaleSet s(m, chosen);
    auto r = truncate(a, s);
    EXPECT_EQ(r.truncated.mass(), a.mass());
    EXPECT_TRUE(r.truncated.is_nonnegative());
    auto tdivs = all_divisors(r.truncated);
    for (auto [from, to] : r.scale_map) EXPECT_TRUE(std::binary_search(tdivs.begin(), tdivs.end(), to)) << to;
}

TEST(Truncation, RejectsMissingDivisor) {
    auto m = factor_modulus(12);
    try {
        truncate(points(12, {0}), ScaleSet(m, {4, 6}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotDivisible);
        EXPECT_NE(std::string(e.what()).find("4,6"), std::string::npos);
    }
}

TEST(FlatDichotomy, UniformGivesChain) {
    Multiset a(factor_modulus(12));
    for (i64 x = 0; x < 12; ++x) a.add_weight(x, 1);
    auto r = flat_dichotomy(a, 12, 2);
    ASSERT_TRUE(std::holds_alternative<ChainCertificate>(r));
    EXPECT_EQ(std::get<ChainCertificate>(r).scales, (std::vector<i64>{12, 6, 3}));
}

TEST(FlatDichotomy, PreconditionFailure) {
    try {
        flat_dichotomy(points(12, {0, 3}), 12, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotDivisible);
    }
}

TEST(FlatDichotomy, WitnessOnThreeFiber) {
    auto r = flat_dichotomy(points(6, {0, 2, 4}), 6, 3);
    ASSERT_TRUE(std::holds_alternative<DichotomyWitness>(r));
    const auto& w = std::get<DichotomyWitness>(r);
    EXPECT_EQ(w.anchor, 0);
    ASSERT_EQ(w.parts.size(), 3u);
    EXPECT_EQ(w.parts[0].support(), (std::vector<i64>{0}));
    EXPECT_EQ(w.parts[1].support(), (std::vector<i64>{2}));
    EXPECT_EQ(w.parts[2].support(), (std::vector<i64>{4}));
}

TEST(FlatDichotomy, RandomPartsNonempty) {
    std::mt19937_64 rng(21);
    for (i64 n : {12, 30, 60, 90}) {
        auto m = factor_modulus(n);
        for (int trial = 0; trial < 20; ++trial) {
            auto a = random_fibered(m, n, rng, 3, 1, 2);
            for (auto [p, e] : factorize(n)) {
                auto r = flat_dichotomy(a, n, p);
                if (auto* w = std::get_if<DichotomyWitness>(&r)) {
                    EXPECT_GT(a.weight(w->anchor), 0);
                    EXPECT_EQ(static_cast<i64>(w->parts.size()), p);
                    for (const auto& part : w->parts) EXPECT_FALSE(part.empty());
                } else {
                    EXPECT_TRUE(chain_divides(a, n, p, e));
                }
            }
        }
    }
}

TEST(FlatCuboids, StackEvaluationsAgree) {
    std::mt19937_64 rng(23);
    for (i64 n : {12, 30, 36, 60}) {
        auto m = factor_modulus(n);
        for (int trial = 0; trial < 5; ++trial) {
            auto a = random_fibered(m, n, rng, 4, -2, 3);
            for (auto [p, e] : factorize(n))
                for (const auto& c : canonical_cuboids(n, p)) {
                    i64 base = delta_eval(a, c);
                    for (i64 nu = 1; nu < p; ++nu) {
                        auto shifted = c;
                        shifted.corner = (c.corner + nu * (n / p)) % n;
                        EXPECT_EQ(delta_eval(a, shifted), base);
                    }
                }
        }
    }
}

TEST(SplitWitness, FiberCase) {
    auto w = split_witness(points(12, {1, 5, 9}), 12, 1);
    EXPECT_EQ(w.prime, 3);
    EXPECT_EQ(w.elements, (std::vector<i64>{1, 5, 9}));
}

TEST(SplitWitness, UniformUsesSmallestPrime) {
    Multiset a(factor_modulus(30));
    for (i64 x = 0; x < 30; ++x) a.add_weight(x, 1);
    EXPECT_EQ(split_witness(a, 30, 7).prime, 2);
}

TEST(SplitWitness, Table1Exhaustive) {
    auto a = table1();
    for (i64 anchor = 0; anchor < 6; ++anchor) {
        auto w = split_witness(a, 6, anchor);
        ASSERT_EQ(static_cast<i64>(w.elements.size()), w.prime);
        EXPECT_EQ(w.elements[0], anchor);
        for (i64 nu = 0; nu < w.prime; ++nu) {
            EXPECT_GT(a.weight(w.elements[nu]), 0);
            EXPECT_EQ(mod(w.elements[nu] - anchor - nu * (6 / w.prime), w.prime), 0);
        }
    }
}

TEST(SplitWitness, Errors) {
    EXPECT_THROW(split_witness(points(6, {0, 1}), 6, 0), Error);
    EXPECT_THROW(split_witness(points(6, {0, 3}), 6, 1), Error);
}

TEST(IsFibered, Examples) {
    auto a = points(12, {0, 6});
    EXPECT_TRUE(is_fibered(a, 12, 2));
    EXPECT_FALSE(is_fibered(a, 12, 3));
    Multiset u(factor_modulus(12));
    for (i64 x = 0; x < 12; ++x) u.add_weight(x, 1);
    EXPECT_TRUE(is_fibered(u, 12, 2));
    EXPECT_TRUE(is_fibered(u, 12, 3));
    EXPECT_THROW(is_fibered(a, 12, 5), Error);
    Multiset neg(factor_modulus(12));
    neg.add_weight(0, -1);
    EXPECT_THROW(is_fibered(neg, 12, 2), Error);
}
