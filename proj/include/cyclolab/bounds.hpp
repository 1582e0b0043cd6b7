#pragma once

#include "cyclolab/cyclotomic.hpp"
#include "cyclolab/multiset.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cyclo {

// sigma(s) = prime direction assigned to scale s; entries follow the order of S.
struct AssignmentFunction {
    std::vector<std::pair<i64, i64>> entries;

    i64 at(i64 scale) const;
};

// EXP_i(S, sigma) for every prime of the modulus.
ExponentProfile exp_profile_sigma(const ScaleSet& s, const AssignmentFunction& sigma);
i64 fib_value(const ScaleSet& s, const AssignmentFunction& sigma);
// Product of Phi_{p_i}(X^{M_i p_i^{alpha-1}}) over alpha in EXP_i(S, sigma), in Z_M.
Multiset standard_set(const ScaleSet& s, const AssignmentFunction& sigma);

struct FibResult {
    i64 value = 0;
    AssignmentFunction sigma;
    Multiset witness;  // standard set, verified
};

// Minimizes over sigma only; no witness.
std::pair<i64, AssignmentFunction> fib_search(const ScaleSet& s);
FibResult fib(const ScaleSet& s);

struct BoundRule {
    std::string rule;
    bool applicable = false;
    i64 value = 0;
    std::string certificate;
};

struct BoundReport {
    std::vector<BoundRule> rules;
    i64 combined = 1;
};

BoundReport analytic_lower_bounds(const ScaleSet& s);
// Product of Phi_s(1) over the prime-power scales; divides the mass of every feasible multiset.
i64 forced_factor(const ScaleSet& s);

struct MinOptions {
    std::optional<i64> max_mass;
    int workers = 1;
    i64 cap = 10000;  // largest lcm(S) searched exactly
    bool analytic_pruning = true;
    i64 max_nodes = 2'000'000;
    i64 max_tableau_cells = 25'000'000;
};

enum class MinStatus { Optimal, BoundedOnly };

struct MinResult {
    MinStatus status = MinStatus::BoundedOnly;
    i64 lower = 0;
    i64 upper = 0;            // FIB(S) or the optimum
    std::optional<Multiset> witness;  // over Z_{lcm(S)}; the optimum when status is Optimal
    i64 nodes = 0;
    std::string note;

    i64 value() const;  // throws unless Optimal
};

MinResult min_exact(const ScaleSet& s, const MinOptions& opt = {});
// Exhaustive enumeration of multisets in Z_{lcm(S)} with weight at 0 and mass <= mass_cap.
MinResult min_bruteforce(const ScaleSet& s, i64 mass_cap = 8);

// One enumeration for every scale set over Z_M: least mass per divisor set, up to mass_cap.
class MinTable {
public:
    MinTable(i64 m, i64 mass_cap);

    const CyclicModulus& modulus() const { return modulus_; }
    const std::vector<i64>& scales() const { return scales_; }
    i64 leaves() const { return leaves_; }
    MinResult lookup(const ScaleSet& s) const;

private:
    CyclicModulus modulus_;
    i64 cap_;
    std::vector<i64> scales_;        // divisors of M other than 1
    std::vector<int> best_;          // per exact divisor mask; 0 = none within the cap
    std::vector<std::vector<i64>> witness_;  // sorted elements
    std::vector<int> superset_best_;
    std::vector<std::size_t> superset_arg_;
    i64 leaves_ = 0;
};

} // namespace cyclo
