#pragma once

#include "cyclolab/multiset.hpp"

#include <random>
#include <vector>

namespace cyclo {

// Values stride * t for t in [lo, hi) of one array coordinate.
struct CoordRange {
    i64 stride = 1;
    i64 lo = 0;
    i64 hi = 1;

    i64 count() const { return hi > lo ? hi - lo : 0; }
    bool operator==(const CoordRange&) const = default;
};

struct SymbolicTerm {
    enum class Kind { Point, Fiber, LongFiber, BoxFiber };

    Kind kind = Kind::Point;
    i64 coeff = 1;
    i64 shift = 0;
    // Direction and depth of the attached (long) fiber; depth 0 means none.
    i64 prime = 0;
    int depth = 0;
    // One range per prime of the modulus; only used by BoxFiber.
    std::vector<CoordRange> box;

    bool operator==(const SymbolicTerm&) const = default;
};

const char* kind_name(SymbolicTerm::Kind kind);

// Positive combination of points, fibers, long fibers and coordinate boxes
// convolved with long fibers. Never materialized unless asked to.
class SymbolicMultiset {
public:
    SymbolicMultiset() = default;
    explicit SymbolicMultiset(CyclicModulus m) : modulus_(std::move(m)) {}

    const CyclicModulus& modulus() const { return modulus_; }
    const std::vector<SymbolicTerm>& terms() const { return terms_; }

    void add_point(i64 x, i64 coeff = 1);
    void add_fiber(i64 prime, i64 shift, i64 coeff = 1);
    void add_long_fiber(const LongFiberSpec& f, i64 coeff = 1);
    // Box shifted by `shift`, convolved with F_{prime,depth} when depth > 0.
    void add_box_fiber(std::vector<CoordRange> box, i64 shift, i64 prime, int depth, i64 coeff = 1);
    void add_term(SymbolicTerm t);

    i64 mass() const;
    Multiset materialize() const;

    bool operator==(const SymbolicMultiset&) const = default;

private:
    CyclicModulus modulus_;
    std::vector<SymbolicTerm> terms_;
};

// Number of elements of a term (not weighted by its coefficient).
i64 term_cardinality(const SymbolicTerm& t, const CyclicModulus& m);

// Counts of coordinate k over the elements of a term, reduced mod p_k^e.
std::vector<i64> coordinate_histogram(const SymbolicTerm& t, const CyclicModulus& m, std::size_t k, int e);

Multiset symbolic_reduce(const SymbolicMultiset& s, i64 n);

// Exact test of (A mod N) == (B mod N) without materializing Z_N.
bool symbolic_congruent(const SymbolicMultiset& a, const SymbolicMultiset& b, i64 n);

// Weight of x in the symbolic multiset.
i64 symbolic_weight(const SymbolicMultiset& s, i64 x);

// Uniform sampler over the elements of a symbolic multiset, counted with multiplicity.
class SymbolicSampler {
public:
    explicit SymbolicSampler(const SymbolicMultiset& s);
    i64 sample(std::mt19937_64& rng) const;
    // Index of the term the last draw came from is not tracked; callers that
    // need provenance use sample_term.
    std::pair<std::size_t, i64> sample_term(std::mt19937_64& rng) const;

private:
    const SymbolicMultiset& s_;
    std::vector<double> cumulative_;
};

} // namespace cyclo
