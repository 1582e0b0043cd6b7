#pragma once

#include "cyclolab/multiset.hpp"

#include <vector>

namespace cyclo {

// Smallest and largest k with Phi_{p^k} | A; both 0 when there is none.
struct PrimeExtremes {
    i64 prime;
    int alpha;
    int beta;
};

enum class UnsupportedTag { AboveAllBeta, Central, Edge, Other };
const char* tag_name(UnsupportedTag tag);

struct UnsupportedDivisor {
    i64 scale;
    UnsupportedTag tag;
};

struct CMReport {
    std::vector<i64> prime_power_divisors;  // S_A^*
    i64 mass = 0;
    i64 product = 1;  // prod Phi_s(1) over S_A^*
    bool t1 = false;
    bool t2 = false;
    std::vector<i64> t2_failures;  // products s_1...s_k with Phi ∤ A
    std::vector<UnsupportedDivisor> unsupported;
    std::vector<PrimeExtremes> extremes;  // one per prime of M
};

// Fills S_A^*, the mass identity and the extremes.
CMReport t1_check(const Multiset& a);
// t1_check plus every product of S_A^* prime powers over at least two distinct primes.
CMReport t2_check(const Multiset& a);
std::vector<UnsupportedDivisor> unsupported_divisors(const Multiset& a);
// t2_check plus unsupported divisors.
CMReport cm_report(const Multiset& a);

// |A||B| = M and A * B is the all-ones multiset on Z_M.
bool tiling_check(const Multiset& a, const Multiset& b);

// Div(A) = {gcd(a - a', M)}, ascending.
std::vector<i64> divisor_set(const Multiset& a);

struct SandsReport {
    bool holds = false;
    std::vector<i64> div_a, div_b, common;
};

SandsReport sands_check(const Multiset& a, const Multiset& b);

struct PartitionReport {
    bool holds = false;
    std::vector<i64> s_a, s_b;
};

// Requires a tiling pair.
PartitionReport prime_power_partition_check(const Multiset& a, const Multiset& b);

struct UniformityReport {
    i64 modulus = 1;    // M'' of the truncation relative to S_A^*
    i64 weight = 0;     // constant weight of the truncation
    bool uniform = false;
    bool above_all_beta = false;   // an unsupported divisor above every beta_i exists
    bool weight_bound_holds = true;  // weight >= min prime whenever above_all_beta
};

// Requires (T2).
UniformityReport t2_truncation_uniformity(const Multiset& a);

// prod Phi_p(X^{M_i p^{k-1}}) over the listed prime powers p^k | M.
Multiset standard_prime_power_set(const std::vector<i64>& s_star, const CyclicModulus& m);
// The same product over the prime powers of M missing from s_star.
Multiset standard_complement(const std::vector<i64>& s_star, const CyclicModulus& m);

} // namespace cyclo
