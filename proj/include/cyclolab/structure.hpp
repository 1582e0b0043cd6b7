#pragma once

#include "cyclolab/cyclotomic.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace cyclo {

// One (long) fiber {shift + nu * scale / p^depth} with its integer coefficient.
struct FiberTerm {
    i64 prime;
    int depth;
    i64 shift;
    i64 coeff;

    bool operator==(const FiberTerm&) const = default;
};

struct FiberDecomposition {
    i64 scale = 0;   // the group Z_scale the identity holds in
    i64 block = 0;   // N for long-fiber decompositions (N | L | M), 0 otherwise
    std::vector<FiberTerm> terms;
    bool nonnegative = false;
};

Multiset reconstruct(const FiberDecomposition& d, const CyclicModulus& ambient);

FiberDecomposition fiber_decompose(const Multiset& a, i64 n);
FiberDecomposition fiber_decompose_nonneg_two_prime(const Multiset& a, i64 n);
FiberDecomposition long_fiber_decompose(const Multiset& a, i64 n);

Multiset truncate_digit(const Multiset& a, i64 prime, int alpha);

struct TruncationResult {
    Multiset truncated;
    CyclicModulus modulus;
    std::vector<std::pair<i64, i64>> scale_map;  // s -> s'
};

struct TruncationTarget {
    CyclicModulus modulus;
    std::vector<std::pair<i64, i64>> scale_map;  // s -> s'
};

// The compressed modulus and scale images depend only on S.
TruncationTarget truncation_target(const ScaleSet& s);

TruncationResult truncate(const Multiset& a, const ScaleSet& s);

struct ChainCertificate {
    i64 scale;
    i64 prime;
    int alpha;
    std::vector<i64> scales;  // N, N/p, ..., N/p^alpha
};

struct DichotomyWitness {
    i64 scale;
    i64 prime;
    i64 anchor;                 // a in supp(A mod N)
    CuboidSpec cuboid;          // first flat cuboid with a nonzero evaluation
    i64 evaluation;
    std::vector<Multiset> parts;  // A mod N restricted to Lambda(a + nu N/p, p D(N))
};

using DichotomyResult = std::variant<ChainCertificate, DichotomyWitness>;

DichotomyResult flat_dichotomy(const Multiset& a, i64 n, i64 p);

struct SplitWitness {
    i64 prime;
    std::vector<i64> elements;  // a_0 = a, ..., a_{p-1}
};

SplitWitness split_witness(const Multiset& a, i64 n, i64 anchor);

bool is_fibered(const Multiset& a, i64 n, i64 p);

} // namespace cyclo
