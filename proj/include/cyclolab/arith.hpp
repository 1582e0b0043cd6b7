#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace cyclo {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// Checked 64-bit arithmetic; all three throw Error(Overflow) instead of wrapping.
i64 checked_add(i64 a, i64 b);
i64 checked_sub(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);
i64 checked_pow(i64 base, unsigned exp);

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);

// Canonical residue in [0, m).
inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

// (a + b) mod m for a, b in [0, m), without intermediate overflow.
inline i64 addmod(i64 a, i64 b, i64 m) {
    i64 r = a - (m - b);
    return r < 0 ? r + m : r;
}

i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 base, u64 exp, i64 m);
// Inverse of a modulo m; requires gcd(a, m) == 1.
i64 invmod(i64 a, i64 m);

bool is_prime(u64 n);

// Sorted (prime, exponent) pairs of n >= 1.
std::vector<std::pair<i64, int>> factorize(i64 n);

// Exponent of prime p in n (n != 0).
int valuation(i64 n, i64 p);

// All positive divisors of n, ascending.
std::vector<i64> divisors_of(i64 n);

} // namespace cyclo
