#pragma once

#include "cyclolab/multiset.hpp"

#include <memory>
#include <vector>

namespace cyclo {

// Dense integer polynomial, index = degree.
using Poly = std::vector<i64>;

// Phi_s, monic of degree phi(s). Results are cached and shared.
const Poly& cyclotomic_poly(i64 s);
// Reference construction: iterated exact division of X^s - 1 by Phi_d, d | s, d < s.
// Quadratic; kept for cross-checking the fast path.
Poly cyclotomic_poly_by_division(i64 s);

i64 euler_phi(i64 n);

// Exact quotient and remainder of a by the monic polynomial b.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
void poly_trim(Poly& a);

// Remainder of (A mod s)(X) modulo Phi_s, laid out per D(s)-grid: entry
// r * phi(rad s) + k is the coefficient of Y^k in the residue class r mod D(s),
// where Y = X^{D(s)}. Zero iff Phi_s divides A.
std::vector<i64> cyclotomic_remainder(const std::vector<i64>& reduced, i64 s);

bool divides(i64 s, const Multiset& a);
// Same test from an already reduced dense vector of length s (s = 1 tests A(1) = 0).
bool divides_reduced(i64 s, const std::vector<i64>& reduced);

constexpr i64 kCuboidCap = 10'000'000;
bool divides_via_cuboids(i64 s, const Multiset& a);

std::vector<i64> all_divisors(const Multiset& a);
std::vector<i64> prime_power_divisors(const Multiset& a);

bool chain_divides(const Multiset& a, i64 n, i64 p, int alpha);

bool is_prime_power(i64 s);
// Phi_s(1): p for s = p^k, else 1 (s >= 2).
i64 cyclotomic_at_one(i64 s);

// A nonempty set of scales s | M, s != 1.
class ScaleSet {
public:
    ScaleSet(CyclicModulus m, std::vector<i64> scales);
    // Modulus defaults to lcm(S).
    static ScaleSet over_lcm(std::vector<i64> scales);

    const CyclicModulus& modulus() const { return modulus_; }
    const std::vector<i64>& scales() const { return scales_; }
    i64 lcm() const;
    std::size_t size() const { return scales_.size(); }

private:
    CyclicModulus modulus_;
    std::vector<i64> scales_;
};

// EXP_i(S) for every prime of the modulus.
struct ExponentProfile {
    std::vector<std::vector<int>> exps;

    std::size_t count(std::size_t i) const { return exps[i].size(); }
};

ExponentProfile exponent_profile(const ScaleSet& s);

} // namespace cyclo
