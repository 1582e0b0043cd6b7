#pragma once

#include "cyclolab/zmod.hpp"

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace cyclo {

// Upper bound on dense materialization (cells); CYCLOLAB_MAX_CELLS overrides the default.
i64 max_cells();
void require_cells(i64 cells, const char* what);

// Integer-weighted multiset on Z_M. Absent keys have weight zero; zero weights are never stored.
class Multiset {
public:
    Multiset() = default;
    explicit Multiset(CyclicModulus m) : modulus_(std::move(m)) {}
    Multiset(CyclicModulus m, const std::map<i64, i64>& weights);

    static Multiset from_points(CyclicModulus m, const std::vector<i64>& points);
    static Multiset from_dense(CyclicModulus m, const std::vector<i64>& weights);

    const CyclicModulus& modulus() const { return modulus_; }
    i64 size_of_group() const { return modulus_.value(); }

    i64 weight(i64 x) const;
    i64 mass() const { return mass_; }
    const std::map<i64, i64>& weights() const { return weights_; }

    bool empty() const { return weights_.empty(); }
    std::size_t support_size() const { return weights_.size(); }
    std::vector<i64> support() const;
    bool is_nonnegative() const;
    // All weights in {0, 1}.
    bool is_set() const;

    std::vector<i64> dense() const;

    void add_weight(i64 x, i64 w);

    bool operator==(const Multiset& other) const {
        return modulus_ == other.modulus_ && weights_ == other.weights_;
    }

private:
    CyclicModulus modulus_;
    std::map<i64, i64> weights_;
    i64 mass_ = 0;
};

// A multiset with nonnegative weights and positive mass.
class NonnegMultiset {
public:
    explicit NonnegMultiset(Multiset a);
    const Multiset& get() const { return a_; }
    operator const Multiset&() const { return a_; }

private:
    Multiset a_;
};

void require_nonnegative(const Multiset& a, const char* what);
void require_same_modulus(const Multiset& a, const Multiset& b);

Multiset reduce_mod(const Multiset& a, i64 n);
// Dense weights of A mod N, length N.
std::vector<i64> reduce_dense(const Multiset& a, i64 n);

Multiset add(const Multiset& a, const Multiset& b);
Multiset subtract(const Multiset& a, const Multiset& b);
Multiset scale(const Multiset& a, i64 c);
Multiset translate(const Multiset& a, i64 t);
Multiset restrict_to(const Multiset& a, const Multiset& y);
Multiset restrict_to_grid(const Multiset& a, const GridSpec& g);
Multiset convolve(const Multiset& a, const Multiset& b);

Multiset fiber_multiset(const FiberSpec& f, const CyclicModulus& m);
Multiset long_fiber_multiset(const LongFiberSpec& f, const CyclicModulus& m);

// An N-cuboid (or a flat cuboid when `omitted` names a prime of N). `offsets`
// lists d_j for the primes of N in ascending order; the omitted slot is ignored.
struct CuboidSpec {
    i64 scale;
    i64 corner;
    std::vector<i64> offsets;
    std::optional<i64> omitted;
};

struct CuboidVertex {
    i64 point;
    int sign;
};

std::vector<CuboidVertex> cuboid_vertices(const CuboidSpec& c);
i64 delta_eval(const Multiset& a, const CuboidSpec& c);
// Evaluation against an already reduced dense vector of length c.scale.
i64 delta_eval_dense(const std::vector<i64>& reduced, const CuboidSpec& c);

// One representative per vertex set (up to global sign) of the N-cuboids,
// flat ones when `omitted` is set. Ordered by corner, then offsets.
std::vector<CuboidSpec> canonical_cuboids(i64 n, std::optional<i64> omitted = std::nullopt);
// Streams the same cuboids with their vertices; stops when `visit` returns false.
void for_each_canonical_cuboid(i64 n, std::optional<i64> omitted,
                               const std::function<bool(const CuboidSpec&, const std::vector<CuboidVertex>&)>& visit);
// N * prod (p_j - 1) over the participating primes; compared against the enumeration cap.
i64 cuboid_enumeration_size(i64 n, std::optional<i64> omitted = std::nullopt);

} // namespace cyclo
