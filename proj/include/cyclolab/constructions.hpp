#pragma once

#include "cyclolab/multiset.hpp"
#include "cyclolab/symbolic.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cyclo {

enum class Verification { Exact, Sampled, Structural };
const char* verification_name(Verification v);

struct ClaimCheck {
    std::string claim;
    bool holds = false;
    Verification how = Verification::Exact;
    i64 trials = 0;      // sampled claims only
    std::uint64_t seed = 0;
    std::string detail;
};

struct ConstructionReport {
    std::string kind;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::optional<Multiset> set;
    std::optional<SymbolicMultiset> symbolic;
    std::vector<ClaimCheck> claims;

    bool accepted() const;
};

// {sum c_j p^{k_j - 1} : 0 <= c_j < p} in Z_{p^max}, mask prod Phi_{p^{k_j}}.
Multiset prime_power_standard(i64 p, std::vector<int> exponents);

// |A| = p3 in Z_{p1 p2 p3} with Phi_{p1 p2} and Phi_{p3}; needs p1 + p2 = p3.
Multiset example_three_primes(i64 p1, i64 p2, i64 p3);

// The 2 x 3 residue table of the 216-point set.
extern const std::array<std::array<i64, 3>, 2> kTable216;
// The 8 x 9 table over Z_8 + Z_9 of the 72-point set; row = x mod 8, column = x mod 9.
extern const std::array<std::array<i64, 9>, 8> kTable72;

// A set in Z_{2^n 3^m}, |A| = 216, with the top three prime power divisors of each prime and Phi_6.
Multiset countex_2_3(int n, int m);
// A set in Z_1296, |A| = 72, with Phi_2 Phi_4 Phi_8 Phi_3 Phi_9 Phi_1296.
Multiset countex_72();

// (s, r) with s p + r q = K, s as large as possible.
std::pair<i64, i64> rep_as_p_q(i64 k, i64 p, i64 q);
// Multiplicative orders of p and q modulo 2^ell.
std::pair<int, int> congruence_exponents(i64 p, i64 q, int ell);

using Matrix = std::vector<std::vector<i64>>;

Matrix build_g(int k);
Matrix build_h(int k);
// (C2 4^k + 1) x (C1 4^k + 1): blocks of H with a final row and column of ones.
Matrix build_y(int k, i64 c1, i64 c2);
// Adds sign * (+1 -1 / -1 +1) on rows r1 < r2 and columns c1 < c2; rejects negative entries.
void cuboid_add(Matrix& y, std::pair<std::size_t, std::size_t> rows, std::pair<std::size_t, std::size_t> cols, int sign);
// Removes every entry 1 of build_y(k, c1, c2) with c1 > c2; returns the number of cuboids added.
i64 clear_ones(Matrix& y, int k, i64 c1, i64 c2);
std::vector<i64> row_sums(const Matrix& y);
std::vector<i64> column_sums(const Matrix& y);

// A in Z_M with A = B mod N and Phi_M | A: each weight of B (over Z_N) becomes p- and q-fibers
// on scale M, one D(M)-grid per fiber.
Multiset lift_to_fibers(const Multiset& b, const CyclicModulus& m, i64 p, i64 q);

ConstructionReport general_two_prime(i64 p, i64 q, i64 materialization_cap);

struct FourPrimeParams {
    std::array<i64, 4> primes{};
    i64 d1 = 0, d2 = 0, d3 = 0, k = 0;
    bool paper_regime = false;  // p_1 > 40
};

// Checks ordering and the inequalities on d_1, d_2, d_3; throws if any fails.
FourPrimeParams four_prime_params(const std::array<i64, 4>& primes);

// Box in the reduced coordinates xbar_i = x_i / p_i of U, one half-open interval per prime.
struct ReducedBox {
    std::array<std::pair<i64, i64>, 4> range;
    i64 cardinality() const;
};

// The boxes of U_1..U_4 (index 0..3); U_4 has two.
std::array<std::vector<ReducedBox>, 4> four_prime_boxes(const FourPrimeParams& fp);
// Exact check that the boxes tile [0, p_1^3) x ... x [0, p_4^3) once, by elementary cells.
bool boxes_partition(const std::vector<ReducedBox>& boxes, const std::array<i64, 4>& extent);

SymbolicMultiset four_prime_set(const FourPrimeParams& fp);
SymbolicMultiset four_prime_uniform(const FourPrimeParams& fp);

ConstructionReport four_prime(const std::array<i64, 4>& primes, i64 samples, std::uint64_t seed);

// Generator plus exact divisor audit for the materializable constructions.
ConstructionReport prime_power_report(i64 p, const std::vector<int>& exponents);
ConstructionReport three_primes_report(i64 p1, i64 p2, i64 p3);
ConstructionReport countex_2_3_report(int n, int m);
ConstructionReport countex_72_report();

} // namespace cyclo
