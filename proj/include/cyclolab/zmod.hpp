#pragma once

#include "cyclolab/arith.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cyclo {

struct PrimePower {
    i64 prime;
    int exponent;

    bool operator==(const PrimePower&) const = default;
};

// Z_M together with its factorization M = prod p_i^{n_i} and the cofactors
// M_i = M / p_i^{n_i} used by the array coordinates x = sum x_i M_i.
class CyclicModulus {
public:
    CyclicModulus() = default;

    static CyclicModulus from_factors(std::vector<PrimePower> factors);

    i64 value() const { return value_; }
    const std::vector<PrimePower>& factors() const { return factors_; }
    std::size_t rank() const { return factors_.size(); }

    i64 prime(std::size_t i) const { return factors_[i].prime; }
    int exponent(std::size_t i) const { return factors_[i].exponent; }
    i64 prime_power(std::size_t i) const { return prime_powers_[i]; }
    i64 cofactor(std::size_t i) const { return cofactors_[i]; }
    // Inverse of M_i modulo p_i^{n_i}.
    i64 cofactor_inverse(std::size_t i) const { return cofactor_inverses_[i]; }

    std::optional<std::size_t> index_of(i64 p) const;
    std::size_t require_index(i64 p) const;

    bool is_divisor(i64 n) const { return n >= 1 && value_ % n == 0; }
    void require_divisor(i64 n) const;

    // The modulus of Z_N for N | M, N >= 2.
    CyclicModulus sub(i64 n) const;

    // p_i-adic valuation of n for each prime of M.
    std::vector<int> valuations(i64 n) const;
    i64 from_valuations(const std::vector<int>& vals) const;

    bool operator==(const CyclicModulus& other) const { return value_ == other.value_; }

private:
    i64 value_ = 1;
    std::vector<PrimePower> factors_;
    std::vector<i64> prime_powers_;
    std::vector<i64> cofactors_;
    std::vector<i64> cofactor_inverses_;
};

CyclicModulus factor_modulus(i64 m);

struct ArrayCoords {
    std::vector<i64> coords;               // x_i in Z_{p_i^{n_i}}
    std::vector<std::vector<int>> digits;  // x_{i,j}, j = 0..n_i-1

    bool operator==(const ArrayCoords&) const = default;
};

ArrayCoords to_coords(i64 x, const CyclicModulus& m);
i64 from_coords(const ArrayCoords& c, const CyclicModulus& m);

// Coordinate vector only (no digits); cheaper in inner loops.
std::vector<i64> coords_of(i64 x, const CyclicModulus& m);
i64 from_coord_vector(const std::vector<i64>& coords, const CyclicModulus& m);

std::vector<int> digits_of(i64 coord, i64 p, int n);
i64 from_digits(const std::vector<int>& digits, i64 p);

struct Radical {
    i64 reduced;              // D(N)
    std::vector<i64> primes;  // P(N), ascending
};

i64 radical(i64 n);
// D(N) = N / rad(N).
i64 radical_quotient(i64 n);
Radical radical_reduced(i64 n, const CyclicModulus& m);

struct GridSpec {
    i64 scale;
    i64 base;
    i64 step;
};

std::vector<i64> grid_elements(const GridSpec& g);
bool grid_contains(const GridSpec& g, i64 x);

// A p-fiber on scale N; `prime` names the direction.
struct FiberSpec {
    i64 scale;
    i64 prime;
    i64 shift;

    bool operator==(const FiberSpec&) const = default;
};

// {shift + nu M / p^depth : 0 <= nu < p^depth} in Z_M.
struct LongFiberSpec {
    i64 prime;
    int depth;
    i64 shift;

    bool operator==(const LongFiberSpec&) const = default;
};

std::vector<i64> fiber_elements(const FiberSpec& f, const CyclicModulus& m);
std::vector<i64> fiber_elements(const LongFiberSpec& f, const CyclicModulus& m);

} // namespace cyclo
