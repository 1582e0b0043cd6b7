#include "cyclolab/tiling.hpp"

#include "cyclolab/cyclotomic.hpp"
#include "cyclolab/error.hpp"
#include "cyclolab/structure.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace cyclo {

const char* tag_name(UnsupportedTag tag) {
    switch (tag) {
    case UnsupportedTag::AboveAllBeta: return "above-all-beta";
    case UnsupportedTag::Central: return "central";
    case UnsupportedTag::Edge: return "edge";
    case UnsupportedTag::Other: return "other";
    }
    return "?";
}

namespace {

void require_nonzero_nonneg(const Multiset& a, const char* what) {
    require_nonnegative(a, what);
    if (a.empty()) throw Error(ErrorKind::InvalidInput, std::string(what) + " must be nonzero");
}

bool contains(const std::vector<i64>& sorted, i64 x) { return std::binary_search(sorted.begin(), sorted.end(), x); }

UnsupportedTag classify(i64 s, const CyclicModulus& m, const std::vector<PrimeExtremes>& ext) {
    auto gamma = m.valuations(s);
    bool above_all = true, central = true;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        above_all = above_all && gamma[i] > ext[i].beta;
        if (gamma[i] == 0) continue;
        if (ext[i].beta == 0) return UnsupportedTag::Other;
        central = central && ext[i].alpha < gamma[i] && gamma[i] < ext[i].beta;
    }
    if (above_all) return UnsupportedTag::AboveAllBeta;
    return central ? UnsupportedTag::Central : UnsupportedTag::Edge;
}

} // namespace

CMReport t1_check(const Multiset& a) {
    require_nonzero_nonneg(a, "t1_check input");
    const auto& m = a.modulus();
    CMReport rep;
    rep.prime_power_divisors = prime_power_divisors(a);
    rep.mass = a.mass();
    for (i64 s : rep.prime_power_divisors) rep.product = checked_mul(rep.product, cyclotomic_at_one(s));
    rep.t1 = rep.mass == rep.product;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        PrimeExtremes e{m.prime(i), 0, 0};
        for (i64 s : rep.prime_power_divisors) {
            if (s % m.prime(i) != 0) continue;
            int k = valuation(s, m.prime(i));
            if (e.alpha == 0) e.alpha = k;
            e.beta = k;
        }
        rep.extremes.push_back(e);
    }
    return rep;
}

CMReport t2_check(const Multiset& a) {
    CMReport rep = t1_check(a);
    const auto& m = a.modulus();
    std::vector<std::vector<i64>> powers(m.rank());
    for (i64 s : rep.prime_power_divisors) powers[*m.index_of(factorize(s)[0].first)].push_back(s);
    // Mixed-radix walk over one optional prime power per prime.
    std::vector<std::size_t> idx(m.rank(), 0);
    while (true) {
        i64 prod = 1;
        int used = 0;
        for (std::size_t i = 0; i < m.rank(); ++i) {
            if (idx[i] == 0) continue;
            prod *= powers[i][idx[i] - 1];
            ++used;
        }
        if (used >= 2 && !divides(prod, a)) rep.t2_failures.push_back(prod);
        std::size_t i = 0;
        while (i < m.rank() && ++idx[i] > powers[i].size()) idx[i++] = 0;
        if (i == m.rank()) break;
    }
    std::sort(rep.t2_failures.begin(), rep.t2_failures.end());
    rep.t2 = rep.t2_failures.empty();
    return rep;
}

std::vector<UnsupportedDivisor> unsupported_divisors(const Multiset& a) {
    CMReport base = t1_check(a);
    const auto& m = a.modulus();
    std::vector<UnsupportedDivisor> out;
    for (i64 s : all_divisors(a)) {
        if (is_prime_power(s)) continue;
        bool ok = true;
        for (auto [p, k] : factorize(s)) {
            if (base.mass % p != 0 || contains(base.prime_power_divisors, checked_pow(p, static_cast<unsigned>(k)))) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back({s, classify(s, m, base.extremes)});
    }
    return out;
}

CMReport cm_report(const Multiset& a) {
    CMReport rep = t2_check(a);
    rep.unsupported = unsupported_divisors(a);
    return rep;
}

bool tiling_check(const Multiset& a, const Multiset& b) {
    require_same_modulus(a, b);
    require_nonnegative(a, "tiling_check A");
    require_nonnegative(b, "tiling_check B");
    i64 m = a.modulus().value();
    if (a.empty() || b.empty() || m % a.mass() != 0 || m / a.mass() != b.mass()) return false;
    Multiset c = convolve(a, b);
    return c.is_set() && static_cast<i64>(c.support_size()) == m;
}

std::vector<i64> divisor_set(const Multiset& a) {
    if (a.empty()) return {};
    i64 m = a.modulus().value();
    auto pts = a.support();
    require_cells(checked_mul(static_cast<i64>(pts.size()), static_cast<i64>(pts.size())), "Div(A) pairs");
    std::set<i64> out;
    for (i64 x : pts)
        for (i64 y : pts) out.insert(gcd(mod(x - y, m), m));
    return {out.begin(), out.end()};
}

SandsReport sands_check(const Multiset& a, const Multiset& b) {
    require_same_modulus(a, b);
    if (!a.is_set() || !b.is_set()) throw Error(ErrorKind::InvalidInput, "sands_check needs sets (weights 0 or 1)");
    SandsReport rep;
    rep.div_a = divisor_set(a);
    rep.div_b = divisor_set(b);
    std::set_intersection(rep.div_a.begin(), rep.div_a.end(), rep.div_b.begin(), rep.div_b.end(), std::back_inserter(rep.common));
    rep.holds = rep.common == std::vector<i64>{a.modulus().value()};
    return rep;
}

PartitionReport prime_power_partition_check(const Multiset& a, const Multiset& b) {
    if (!tiling_check(a, b)) throw Error(ErrorKind::Inapplicable, "A and B do not tile Z_M");
    const auto& m = a.modulus();
    PartitionReport rep;
    rep.s_a = prime_power_divisors(a);
    rep.s_b = prime_power_divisors(b);
    std::vector<i64> all;
    for (std::size_t i = 0; i < m.rank(); ++i)
        for (int k = 1; k <= m.exponent(i); ++k) all.push_back(checked_pow(m.prime(i), static_cast<unsigned>(k)));
    std::sort(all.begin(), all.end());
    std::vector<i64> both, either;
    std::set_intersection(rep.s_a.begin(), rep.s_a.end(), rep.s_b.begin(), rep.s_b.end(), std::back_inserter(both));
    std::set_union(rep.s_a.begin(), rep.s_a.end(), rep.s_b.begin(), rep.s_b.end(), std::back_inserter(either));
    auto product = [](const std::vector<i64>& s) {
        i64 p = 1;
        for (i64 x : s) p = checked_mul(p, cyclotomic_at_one(x));
        return p;
    };
    rep.holds = both.empty() && either == all && product(rep.s_a) == a.mass() && product(rep.s_b) == b.mass();
    return rep;
}

UniformityReport t2_truncation_uniformity(const Multiset& a) {
    CMReport rep = cm_report(a);
    if (!rep.t2) throw Error(ErrorKind::Inapplicable, "A does not satisfy (T2)");
    const auto& m = a.modulus();
    UniformityReport out;
    for (const auto& u : rep.unsupported) out.above_all_beta = out.above_all_beta || u.tag == UnsupportedTag::AboveAllBeta;
    std::vector<i64> weights;
    if (rep.prime_power_divisors.empty()) {
        weights = {a.mass()};
    } else {
        auto tr = truncate(a, ScaleSet(m, rep.prime_power_divisors));
        out.modulus = tr.modulus.value();
        weights = tr.truncated.dense();
    }
    out.weight = weights[0];
    out.uniform = std::all_of(weights.begin(), weights.end(), [&](i64 w) { return w == out.weight; });
    i64 least = m.rank() > 0 ? m.prime(0) : 1;
    out.weight_bound_holds = !out.above_all_beta || out.weight >= least;
    return out;
}

namespace {

// (prime index, k) per entry; rejects anything that is not a prime power dividing M.
std::vector<std::pair<std::size_t, int>> parse_prime_powers(const std::vector<i64>& s_star, const CyclicModulus& m) {
    std::vector<std::pair<std::size_t, int>> out;
    for (i64 s : s_star) {
        if (s < 2 || !is_prime_power(s) || !m.is_divisor(s)) throw Error(ErrorKind::InvalidScale, std::to_string(s) + " is not a prime power dividing " + std::to_string(m.value()));
        auto f = factorize(s)[0];
        out.emplace_back(*m.index_of(f.first), f.second);
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw Error(ErrorKind::InvalidScale, "repeated prime power");
    return out;
}

Multiset product_of_factors(const std::vector<std::pair<std::size_t, int>>& pp, const CyclicModulus& m) {
    require_cells(m.value(), "standard set");
    Multiset acc = Multiset::from_points(m, {0});
    for (auto [i, k] : pp) {
        i64 step = checked_mul(m.cofactor(i), checked_pow(m.prime(i), static_cast<unsigned>(k - 1)));
        std::vector<i64> pts;
        for (i64 nu = 0; nu < m.prime(i); ++nu) pts.push_back(nu * step);
        acc = convolve(acc, Multiset::from_points(m, pts));
    }
    return acc;
}

} // namespace

Multiset standard_prime_power_set(const std::vector<i64>& s_star, const CyclicModulus& m) {
    return product_of_factors(parse_prime_powers(s_star, m), m);
}

Multiset standard_complement(const std::vector<i64>& s_star, const CyclicModulus& m) {
    auto given = parse_prime_powers(s_star, m);
    std::vector<std::pair<std::size_t, int>> rest;
    for (std::size_t i = 0; i < m.rank(); ++i)
        for (int k = 1; k <= m.exponent(i); ++k)
            if (!std::binary_search(given.begin(), given.end(), std::make_pair(i, k))) rest.emplace_back(i, k);
    return product_of_factors(rest, m);
}

} // namespace cyclo
