#include "cyclolab/bounds.hpp"
#include "cyclolab/error.hpp"
#include "cyclolab/structure.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace cyclo;

namespace {

MinOptions plain() {
    MinOptions o;
    o.analytic_pruning = false;
    return o;
}

const BoundRule& rule(const BoundReport& r, const std::string& name) {
    for (const auto& x : r.rules)
        if (x.rule == name) return x;
    throw std::runtime_error("no rule " + name);
}

} // namespace

TEST(ExpProfile, LargeTwoPrimeSet) {
    auto s = ScaleSet::over_lcm({512, 256, 128, 6, 729, 243, 81});
    auto prof = exponent_profile(s);
    EXPECT_EQ(prof.exps[0], (std::vector<int>{1, 7, 8, 9}));
    EXPECT_EQ(prof.exps[1], (std::vector<int>{1, 4, 5, 6}));
}

TEST(ExpProfile, SigmaRestricts) {
    auto s = ScaleSet::over_lcm({512, 256, 128, 6, 729, 243, 81});
    AssignmentFunction sigma;
    for (i64 sc : s.scales()) sigma.entries.emplace_back(sc, sc % 2 == 0 ? 2 : 3);
    auto prof = exp_profile_sigma(s, sigma);
    EXPECT_EQ(prof.exps[0], (std::vector<int>{1, 7, 8, 9}));
    EXPECT_EQ(prof.exps[1], (std::vector<int>{4, 5, 6}));
    EXPECT_EQ(fib_value(s, sigma), 16 * 27);
    sigma.entries[0].second = 5;
    EXPECT_THROW(exp_profile_sigma(s, sigma), Error);
}

TEST(Fib, PrimePowerChain) {
    for (i64 p : {2, 3, 5})
        for (int m = 1; m <= 4; ++m) {
            std::vector<i64> sc;
            for (int a = 1; a <= m; ++a) sc.push_back(checked_pow(p, static_cast<unsigned>(2 * a - 1)));
            EXPECT_EQ(fib(ScaleSet::over_lcm(sc)).value, checked_pow(p, static_cast<unsigned>(m)));
        }
}

TEST(Fib, ThreePrimeSingleScale) {
    auto r = fib(ScaleSet::over_lcm({6, 5}));
    EXPECT_EQ(r.value, 10);
}

TEST(Fib, AssignmentChoiceMatters) {
    // sigma(6) = 2 gives 2^4 3^3 = 432; sigma(6) = 3 gives 2^3 3^4 = 648.
    auto r = fib(ScaleSet::over_lcm({512, 256, 128, 6, 729, 243, 81}));
    EXPECT_EQ(r.value, 432);
    EXPECT_EQ(r.sigma.at(6), 2);
}

TEST(Fib, WitnessIsStandardAndFibered) {
    std::mt19937_64 rng(7);
    for (i64 m : {72, 360, 900, 1000}) {
        auto divs = divisors_of(m);
        divs.erase(divs.begin());
        for (int trial = 0; trial < 15; ++trial) {
            std::shuffle(divs.begin(), divs.end(), rng);
            std::vector<i64> sc(divs.begin(), divs.begin() + 1 + static_cast<long>(rng() % 4));
            ScaleSet s(factor_modulus(m), sc);
            auto r = fib(s);
            EXPECT_EQ(r.witness.mass(), r.value);
            EXPECT_GT(r.witness.weight(0), 0);
            for (auto [scale, p] : r.sigma.entries) {
                EXPECT_TRUE(divides(scale, r.witness));
                EXPECT_TRUE(is_fibered(r.witness, scale, p));
            }
            // Exhaustive check over all assignment functions.
            std::vector<std::vector<i64>> opts;
            for (i64 x : s.scales()) {
                std::vector<i64> ps;
                for (auto [p, e] : factorize(x)) ps.push_back(p);
                opts.push_back(ps);
            }
            i64 best = std::numeric_limits<i64>::max();
            std::vector<std::size_t> idx(opts.size(), 0);
            while (true) {
                AssignmentFunction sigma;
                for (std::size_t k = 0; k < opts.size(); ++k) sigma.entries.emplace_back(s.scales()[k], opts[k][idx[k]]);
                best = std::min(best, fib_value(s, sigma));
                std::size_t k = 0;
                while (k < idx.size() && ++idx[k] == opts[k].size()) idx[k++] = 0;
                if (k == idx.size()) break;
            }
            EXPECT_EQ(r.value, best);
        }
    }
}

TEST(Analytic, LamLeungOnly) {
    auto r = analytic_lower_bounds(ScaleSet::over_lcm({6, 5}));
    EXPECT_EQ(rule(r, "lam-leung").value, 5);
    EXPECT_FALSE(rule(r, "diagonal-chain").applicable);
    EXPECT_EQ(r.combined, 5);
}

TEST(Analytic, PrimePowerProduct) {
    auto r = analytic_lower_bounds(ScaleSet::over_lcm({2, 4, 8, 3, 9}));
    EXPECT_EQ(rule(r, "prime-power-product").value, 72);
    EXPECT_EQ(forced_factor(ScaleSet::over_lcm({2, 4, 8, 3, 9})), 72);
}

TEST(Analytic, BoostedTwoPrime) {
    auto r = analytic_lower_bounds(ScaleSet::over_lcm({4, 6, 9}));
    EXPECT_EQ(rule(r, "three-divisors").value, 12);
    auto below = analytic_lower_bounds(ScaleSet::over_lcm({2, 4 * 9, 3}));
    EXPECT_EQ(rule(below, "three-divisors-below").value, 12);
}

TEST(Analytic, DiagonalChain) {
    // 2 | D(12) = 2 and 12 | D(144) = 12.
    auto r = analytic_lower_bounds(ScaleSet::over_lcm({2, 12, 144}));
    EXPECT_TRUE(rule(r, "diagonal-chain").applicable);
    EXPECT_EQ(rule(r, "diagonal-chain").value, 8);
}

TEST(Analytic, LargePrime) {
    // p = 5 > q = 2, top runs 5^2 and 2^2 with a = b = 1, and 10 in S.
    auto r = analytic_lower_bounds(ScaleSet::over_lcm({25, 4, 10}));
    EXPECT_EQ(rule(r, "large-prime").value, 2 * 5 * 2);
}

TEST(Analytic, Growth) {
    auto r = analytic_lower_bounds(ScaleSet::over_lcm({4, 2 * 5, 4 * 7}));
    EXPECT_TRUE(rule(r, "growth").applicable);
    EXPECT_EQ(rule(r, "growth").value, 4);
    EXPECT_FALSE(rule(analytic_lower_bounds(ScaleSet::over_lcm({8, 6})), "growth").applicable);
}

TEST(MinExact, SmallExamples) {
    auto a = min_exact(ScaleSet::over_lcm({6}), plain());
    EXPECT_EQ(a.value(), 2);
    EXPECT_EQ(a.witness->support(), (std::vector<i64>{0, 3}));
    auto b = min_exact(ScaleSet::over_lcm({6, 5}), plain());
    EXPECT_EQ(b.value(), 5);
    EXPECT_TRUE(divides(6, *b.witness) && divides(5, *b.witness));
    auto c = min_exact(ScaleSet::over_lcm({2, 4, 8}), plain());
    EXPECT_EQ(c.value(), 8);
    EXPECT_EQ(c.witness->support(), (std::vector<i64>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(MinExact, MassCapAndSolverCap) {
    MinOptions o = plain();
    o.max_mass = 4;
    auto r = min_exact(ScaleSet::over_lcm({6, 5}), o);
    EXPECT_EQ(r.status, MinStatus::BoundedOnly);
    EXPECT_EQ(r.lower, 5);
    EXPECT_EQ(r.upper, 10);
    o = plain();
    o.cap = 20;
    auto big = min_exact(ScaleSet::over_lcm({6, 5}), o);
    EXPECT_EQ(big.status, MinStatus::BoundedOnly);
    EXPECT_EQ(big.upper, 10);
    EXPECT_THROW(big.value(), Error);
}

TEST(MinExact, AgreesWithBruteforceOnZ12) {
    MinTable tab(12, 8);
    for (std::size_t mask = 1; mask < (std::size_t{1} << tab.scales().size()); ++mask) {
        std::vector<i64> sc;
        for (std::size_t b = 0; b < tab.scales().size(); ++b)
            if (mask >> b & 1) sc.push_back(tab.scales()[b]);
        auto s = ScaleSet::over_lcm(sc);
        auto direct = min_bruteforce(s, 8);
        auto table = tab.lookup(s);
        auto exact = min_exact(s, plain());
        ASSERT_EQ(direct.status, table.status);
        if (direct.status == MinStatus::Optimal) {
            EXPECT_EQ(direct.value(), table.value());
            EXPECT_EQ(exact.value(), direct.value());
        } else {
            EXPECT_GT(exact.value(), 8);
        }
    }
}

TEST(MinExact, WorkersGiveSameValue) {
    MinOptions o = plain();
    o.workers = 4;
    for (auto sc : std::vector<std::vector<i64>>{{8, 9, 12}, {54, 9, 8}, {6, 5}, {12, 18}})
        EXPECT_EQ(min_exact(ScaleSet::over_lcm(sc), o).value(), min_exact(ScaleSet::over_lcm(sc), plain()).value());
}

TEST(MinExact, NodeBudgetGivesBoundedResult) {
    MinOptions o = plain();
    o.max_nodes = 1;
    auto r = min_exact(ScaleSet::over_lcm({54, 9, 8}), o);
    EXPECT_EQ(r.status, MinStatus::BoundedOnly);
    EXPECT_LE(r.lower, 12);
    EXPECT_GE(r.upper, 12);
}

TEST(Invariants, BoundsSandwichMinOnZ30AndZ36) {
    for (i64 m : {30, 36}) {
        MinTable tab(m, 6);
        for (std::size_t mask = 1; mask < (std::size_t{1} << tab.scales().size()); ++mask) {
            std::vector<i64> sc;
            for (std::size_t b = 0; b < tab.scales().size(); ++b)
                if (mask >> b & 1) sc.push_back(tab.scales()[b]);
            auto s = ScaleSet::over_lcm(sc);
            auto exact = min_exact(s, plain());
            i64 v = exact.value();
            EXPECT_LE(v, fib_search(s).first);
            EXPECT_EQ(v % forced_factor(s), 0);
            for (const auto& r : analytic_lower_bounds(s).rules)
                if (r.applicable) EXPECT_LE(r.value, v) << r.rule << " mask " << mask << " M=" << m;
            auto t = tab.lookup(s);
            if (t.status == MinStatus::Optimal) EXPECT_EQ(t.value(), v);
            else EXPECT_GT(v, 6);
            EXPECT_EQ(min_exact(s).value(), v);
        }
    }
}

TEST(Invariants, BoundsBelowMinOnD216) {
    auto divs = divisors_of(216);
    divs.erase(divs.begin());
    std::mt19937_64 rng(31);
    int solved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::shuffle(divs.begin(), divs.end(), rng);
        std::vector<i64> sc(divs.begin(), divs.begin() + 2 + static_cast<long>(rng() % 3));
        auto s = ScaleSet::over_lcm(sc);
        auto opt = plain();
        opt.max_nodes = 20000;
        auto res = min_exact(s, opt);
        // A bounded-only result still caps MIN from above.
        i64 v = res.status == MinStatus::Optimal ? res.value() : res.upper;
        solved += res.status == MinStatus::Optimal;
        for (const auto& r : analytic_lower_bounds(s).rules)
            if (r.applicable) EXPECT_LE(r.value, v) << r.rule;
    }
    EXPECT_GE(solved, 50);
}
